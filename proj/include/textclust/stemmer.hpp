#pragma once

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "textclust/error.hpp"

namespace textclust {

namespace detail {

// Porter's suffix-stripping algorithm, following the reference
// implementation (including its two departures: BLI -> BLE, LOGI -> LOG).
// Operates on lowercase ASCII words; words of length <= 2 are returned
// unchanged, as are words containing anything outside a-z.
class PorterState {
public:
    explicit PorterState(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

    std::string run() {
        if (k_ <= 1) return b_;
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        return b_.substr(0, static_cast<std::size_t>(k_) + 1);
    }

private:
    // true when b_[i] is a consonant; y counts as a consonant at the start
    // of the word or after a vowel
    bool cons(int i) const {
        switch (b_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // the measure m of the stem b_[0..j_]: the number of VC sequences in
    // its [C](VC)^m[V] form
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i) {
            if (!cons(i)) return true;
        }
        return false;
    }

    bool doublec(int j) const {
        return j >= 1 && b_[static_cast<std::size_t>(j)] == b_[static_cast<std::size_t>(j) - 1] &&
               cons(j);
    }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        const char ch = b_[static_cast<std::size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char* s) {
        const int len = static_cast<int>(std::strlen(s));
        if (len > k_ + 1) return false;
        if (b_.compare(static_cast<std::size_t>(k_ - len + 1), static_cast<std::size_t>(len), s) != 0)
            return false;
        j_ = k_ - len;
        return true;
    }

    void setto(const char* s) {
        b_.erase(static_cast<std::size_t>(j_) + 1);
        b_.append(s);
        k_ = static_cast<int>(b_.size()) - 1;
    }

    void r(const char* s) {
        if (m() > 0) setto(s);
    }

    void step1ab() {
        if (b_[static_cast<std::size_t>(k_)] == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                setto("i");
            } else if (b_[static_cast<std::size_t>(k_) - 1] != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                setto("ate");
            } else if (ends("bl")) {
                setto("ble");
            } else if (ends("iz")) {
                setto("ize");
            } else if (doublec(k_)) {
                --k_;
                const char ch = b_[static_cast<std::size_t>(k_)];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (m() == 1 && cvc(k_)) {
                setto("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
    }

    void step2() {
        if (k_ < 1) return;
        switch (b_[static_cast<std::size_t>(k_) - 1]) {
            case 'a':
                if (ends("ational")) { r("ate"); break; }
                if (ends("tional")) { r("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { r("ence"); break; }
                if (ends("anci")) { r("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { r("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { r("ble"); break; }
                if (ends("alli")) { r("al"); break; }
                if (ends("entli")) { r("ent"); break; }
                if (ends("eli")) { r("e"); break; }
                if (ends("ousli")) { r("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { r("ize"); break; }
                if (ends("ation")) { r("ate"); break; }
                if (ends("ator")) { r("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { r("al"); break; }
                if (ends("iveness")) { r("ive"); break; }
                if (ends("fulness")) { r("ful"); break; }
                if (ends("ousness")) { r("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { r("al"); break; }
                if (ends("iviti")) { r("ive"); break; }
                if (ends("biliti")) { r("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { r("log"); break; }
                break;
            default:
                break;
        }
    }

    void step3() {
        switch (b_[static_cast<std::size_t>(k_)]) {
            case 'e':
                if (ends("icate")) { r("ic"); break; }
                if (ends("ative")) { r(""); break; }
                if (ends("alize")) { r("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { r("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { r("ic"); break; }
                if (ends("ful")) { r(""); break; }
                break;
            case 's':
                if (ends("ness")) { r(""); break; }
                break;
            default:
                break;
        }
    }

    void step4() {
        if (k_ < 1) return;
        switch (b_[static_cast<std::size_t>(k_) - 1]) {
            case 'a':
                if (ends("al")) break;
                return;
            case 'c':
                if (ends("ance")) break;
                if (ends("ence")) break;
                return;
            case 'e':
                if (ends("er")) break;
                return;
            case 'i':
                if (ends("ic")) break;
                return;
            case 'l':
                if (ends("able")) break;
                if (ends("ible")) break;
                return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j_ >= 0 &&
                    (b_[static_cast<std::size_t>(j_)] == 's' || b_[static_cast<std::size_t>(j_)] == 't'))
                    break;
                if (ends("ou")) break;
                return;
            case 's':
                if (ends("ism")) break;
                return;
            case 't':
                if (ends("ate")) break;
                if (ends("iti")) break;
                return;
            case 'u':
                if (ends("ous")) break;
                return;
            case 'v':
                if (ends("ive")) break;
                return;
            case 'z':
                if (ends("ize")) break;
                return;
            default:
                return;
        }
        if (m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[static_cast<std::size_t>(k_)] == 'e') {
            const int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (b_[static_cast<std::size_t>(k_)] == 'l' && doublec(k_) && m() > 1) --k_;
    }

    std::string b_;
    int k_;
    int j_ = 0;
};

inline bool ascii_lower_word(std::string_view w) {
    for (const char ch : w) {
        if (ch < 'a' || ch > 'z') return false;
    }
    return !w.empty();
}

}  // namespace detail

// Porter stem of a lowercase token. Tokens containing anything outside
// ASCII a-z (accented words in particular) pass through unchanged; the
// algorithm is defined for English only.
inline std::string porter_stem(std::string word) {
    if (!detail::ascii_lower_word(word)) return word;
    return detail::PorterState(std::move(word)).run();
}

// Pluggable stemming procedure. Built-ins: "porter" (default, English),
// "identity" (no-op) and lookup-table stemmers where unknown words pass
// through. The name is recorded in run manifests.
class Stemmer {
public:
    static Stemmer porter() { return Stemmer(Kind::porter, "porter", {}); }
    static Stemmer identity() { return Stemmer(Kind::identity, "identity", {}); }

    static Stemmer table(std::map<std::string, std::string> entries,
                         std::string name = "table") {
        return Stemmer(Kind::table, std::move(name), std::move(entries));
    }

    // TSV file, one "word<TAB>stem" pair per line; '#' lines are comments.
    static Stemmer table_from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open stem table: " + path);
        std::map<std::string, std::string> entries;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw data_error(path + ": stem table line without a tab: " + line);
            entries.emplace(line.substr(0, tab), line.substr(tab + 1));
        }
        return Stemmer(Kind::table, "table:" + path, std::move(entries));
    }

    // Accepts "porter", "identity" or "table:PATH".
    static Stemmer parse(const std::string& spec) {
        if (spec == "porter") return porter();
        if (spec == "identity") return identity();
        if (spec.rfind("table:", 0) == 0) return table_from_file(spec.substr(6));
        throw data_error("unknown stemmer '" + spec + "' (expected porter, identity or table:PATH)");
    }

    std::string apply(const std::string& token) const {
        switch (kind_) {
            case Kind::porter:
                return porter_stem(token);
            case Kind::identity:
                return token;
            case Kind::table: {
                const auto it = entries_->find(token);
                return it == entries_->end() ? token : it->second;
            }
        }
        return token;
    }

    const std::string& name() const { return name_; }

private:
    enum class Kind { porter, identity, table };

    Stemmer(Kind kind, std::string name, std::map<std::string, std::string> entries)
        : kind_(kind),
          name_(std::move(name)),
          entries_(std::make_shared<const std::map<std::string, std::string>>(std::move(entries))) {}

    Kind kind_;
    std::string name_;
    std::shared_ptr<const std::map<std::string, std::string>> entries_;
};

}  // namespace textclust
