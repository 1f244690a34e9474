#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "textclust/error.hpp"
#include "textclust/normalize.hpp"

namespace textclust {

// An ordered tuple of n tokens, stored space-joined. Tokens are
// letters-only, so the joined form is unambiguous, and because ' '
// sorts below every letter, comparing joined strings is exactly
// tuple-lexicographic comparison.
struct NGramKey {
    std::string text;
    int n = 1;

    std::vector<std::string> words() const {
        std::vector<std::string> out;
        std::size_t begin = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ' ') {
                out.push_back(text.substr(begin, i - begin));
                begin = i + 1;
            }
        }
        return out;
    }

    friend bool operator==(const NGramKey&, const NGramKey&) = default;
    friend auto operator<=>(const NGramKey& a, const NGramKey& b) { return a.text <=> b.text; }
};

namespace detail {

inline std::string join_window(const std::vector<std::string>& tokens, std::size_t begin,
                               std::size_t n) {
    std::string out = tokens[begin];
    for (std::size_t i = 1; i < n; ++i) {
        out.push_back(' ');
        out += tokens[begin + i];
    }
    return out;
}

inline int arity_of(const std::string& joined) {
    return 1 + static_cast<int>(std::count(joined.begin(), joined.end(), ' '));
}

}  // namespace detail

// Frequency dictionary of n-grams over a normalized corpus. Counting is
// occurrence-based: a window appearing twice in one document counts
// twice. Windows never cross document boundaries.
struct NGramDictionary {
    std::unordered_map<std::string, std::uint64_t> entries;  // joined key -> count
    std::set<int> n_values;
    std::size_t corpus_size = 0;

    std::size_t size() const { return entries.size(); }
};

inline NGramDictionary build_dictionary(const std::vector<TokenSeq>& corpus_tokens, int n) {
    if (n < 1) throw std::invalid_argument("n-gram arity must be >= 1");
    NGramDictionary dict;
    dict.n_values.insert(n);
    dict.corpus_size = corpus_tokens.size();
    const std::size_t width = static_cast<std::size_t>(n);
    for (const TokenSeq& doc : corpus_tokens) {
        if (doc.tokens.size() < width) continue;
        for (std::size_t i = 0; i + width <= doc.tokens.size(); ++i) {
            ++dict.entries[detail::join_window(doc.tokens, i, width)];
        }
    }
    return dict;
}

// Union of two dictionaries built over the same corpus with disjoint
// arities (1-gram + 2-gram in the usual case). A default-constructed
// dictionary acts as the identity.
inline NGramDictionary merge_dictionaries(const NGramDictionary& d1, const NGramDictionary& d2) {
    if (d1.n_values.empty()) return d2;
    if (d2.n_values.empty()) return d1;
    for (const int n : d2.n_values) {
        if (d1.n_values.count(n))
            throw std::invalid_argument("cannot merge dictionaries with overlapping arity " +
                                        std::to_string(n));
    }
    if (d1.corpus_size != d2.corpus_size)
        throw std::invalid_argument("cannot merge dictionaries built over different corpora");
    NGramDictionary out = d1;
    out.n_values.insert(d2.n_values.begin(), d2.n_values.end());
    out.entries.insert(d2.entries.begin(), d2.entries.end());
    return out;
}

namespace detail {

// Deterministic feature order: 1-grams before 2-grams, then count
// descending, then key ascending.
struct FeatureOrder {
    const std::unordered_map<std::string, std::uint64_t>* counts;

    bool operator()(const NGramKey& a, const NGramKey& b) const {
        if (a.n != b.n) return a.n < b.n;
        const std::uint64_t ca = counts->at(a.text);
        const std::uint64_t cb = counts->at(b.text);
        if (ca != cb) return ca > cb;
        return a.text < b.text;
    }
};

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h) {
    for (const char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// The ordered vocabulary defining vector coordinates: every dictionary
// key with count >= min_freq, in the deterministic feature order. hash
// identifies the ordered feature list so that matrix files and
// dictionaries can be checked for compatibility.
struct FeatureSpace {
    std::vector<NGramKey> features;
    std::unordered_map<std::string, std::uint32_t> index;
    std::uint32_t min_freq = 1;

    std::size_t size() const { return features.size(); }
    bool empty() const { return features.empty(); }

    std::set<int> arities() const {
        std::set<int> out;
        for (const NGramKey& f : features) out.insert(f.n);
        return out;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const NGramKey& f : features) {
            h = detail::fnv1a64(f.text, h);
            h = detail::fnv1a64("\n", h);
        }
        return h;
    }
};

inline FeatureSpace select_features(const NGramDictionary& dict, std::uint32_t min_freq) {
    if (min_freq < 1) throw std::invalid_argument("min_freq must be >= 1");
    FeatureSpace space;
    space.min_freq = min_freq;
    space.features.reserve(dict.entries.size());
    for (const auto& [text, count] : dict.entries) {
        if (count >= min_freq) space.features.push_back(NGramKey{text, detail::arity_of(text)});
    }
    std::sort(space.features.begin(), space.features.end(), detail::FeatureOrder{&dict.entries});
    space.index.reserve(space.features.size());
    for (std::size_t i = 0; i < space.features.size(); ++i) {
        space.index.emplace(space.features[i].text, static_cast<std::uint32_t>(i));
    }
    return space;
}

// TSV export: one "word1[ word2 ...]<TAB>count" line per entry in feature
// order. A '#' header line carries corpus_size and the arity set so a
// round-trip preserves the whole dictionary.
inline void save_dictionary_tsv(const NGramDictionary& dict, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write dictionary: " + path);
    out << "# textclust-dictionary\tcorpus_size=" << dict.corpus_size << "\tarities=";
    bool first = true;
    for (const int n : dict.n_values) {
        if (!first) out << ',';
        out << n;
        first = false;
    }
    out << '\n';
    const FeatureSpace order = select_features(dict, 1);
    for (const NGramKey& key : order.features) {
        out << key.text << '\t' << dict.entries.at(key.text) << '\n';
    }
    if (!out) throw io_error("failed writing dictionary: " + path);
}

inline NGramDictionary load_dictionary_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open dictionary: " + path);
    NGramDictionary dict;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("corpus_size=");
            if (pos != std::string::npos)
                dict.corpus_size = std::strtoull(line.c_str() + pos + 12, nullptr, 10);
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw data_error(path + ":" + std::to_string(lineno) + ": expected 'ngram<TAB>count'");
        std::string key = line.substr(0, tab);
        char* end = nullptr;
        const std::uint64_t count = std::strtoull(line.c_str() + tab + 1, &end, 10);
        if (end == line.c_str() + tab + 1 || count == 0)
            throw data_error(path + ":" + std::to_string(lineno) + ": bad count");
        dict.n_values.insert(detail::arity_of(key));
        dict.entries[std::move(key)] = count;
    }
    return dict;
}

}  // namespace textclust
