#pragma once

#include <cstdint>
#include <string>
#include <string_view>

// Minimal UTF-8 handling: decoding, letter classification and lowercase
// mapping for the scripts this toolkit targets (Latin incl. the Latin-1
// and Extended-A/Additional accents, Greek, Cyrillic). Codepoints outside
// the covered blocks are treated as non-letters; unmapped letters
// lowercase to themselves. Invalid byte sequences decode to U+FFFD.

namespace textclust::uni {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decode the codepoint starting at s[i]; advances i past it.
inline char32_t decode(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t j) { return static_cast<unsigned char>(s[j]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;  // stray continuation or invalid lead byte
        return kReplacement;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacement;
    }
    for (int j = 1; j < len; ++j) {
        const unsigned char b = byte(i + j);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    // reject overlong encodings and surrogates
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        return kReplacement;
    }
    return cp;
}

inline void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool is_letter(char32_t cp) {
    struct Range {
        char32_t lo, hi;
    };
    static constexpr Range ranges[] = {
        {0x0041, 0x005A}, {0x0061, 0x007A}, {0x00AA, 0x00AA}, {0x00B5, 0x00B5},
        {0x00BA, 0x00BA}, {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02C1},
        {0x0386, 0x0386}, {0x0388, 0x038A}, {0x038C, 0x038C}, {0x038E, 0x03A1},
        {0x03A3, 0x03FF}, {0x0400, 0x0481}, {0x048A, 0x052F}, {0x1E00, 0x1EFF},
    };
    for (const auto& r : ranges) {
        if (cp < r.lo) return false;
        if (cp <= r.hi) return true;
    }
    return false;
}

inline char32_t to_lower(char32_t cp) {
    if (cp >= 0x41 && cp <= 0x5A) return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;  // Latin-1 uppercase, × excluded
    if (cp < 0x100) return cp;
    if (cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;  // Latin Extended-A pairs
    if (cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;
    if (cp == 0x179 || cp == 0x17B || cp == 0x17D) return cp + 1;
    if (cp == 0x17F) return 0x73;  // long s
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if (cp >= 0x391 && cp <= 0x3A1) return cp + 0x20;
    if (cp >= 0x3A3 && cp <= 0x3AB) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x460 && cp <= 0x481) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x48A && cp <= 0x52F) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x1E00 && cp <= 0x1EFF) return (cp % 2 == 0) ? cp + 1 : cp;
    return cp;
}

inline std::string lower_copy(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        encode(to_lower(decode(s, i)), out);
    }
    return out;
}

// True when every codepoint of s is a letter (and s is non-empty).
inline bool all_letters(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_letter(decode(s, i))) return false;
    }
    return true;
}

}  // namespace textclust::uni
