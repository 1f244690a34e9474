#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "textclust/corpus.hpp"
#include "textclust/error.hpp"
#include "textclust/parallel.hpp"
#include "textclust/stemmer.hpp"
#include "textclust/unicode.hpp"

namespace textclust {

// The normalized form of one document: lowercase, letters-only tokens in
// source order, stopwords removed, stems applied.
struct TokenSeq {
    std::vector<std::string> tokens;
    std::int64_t source_id = -1;
};

struct NormalizerConfig {
    std::unordered_set<std::string> stopwords;
    Stemmer stemmer = Stemmer::porter();

    // English stopwords + Porter, the configuration for real headline runs.
    static NormalizerConfig english();
    static NormalizerConfig none() { return NormalizerConfig{{}, Stemmer::identity()}; }
};

// One word per line, '#' comments and blank lines ignored. Words are
// lowercased; a word with a non-letter character is rejected.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open stopword list: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t b = 0, e = line.size();
        while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
        while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
        if (b == e || line[b] == '#') continue;
        std::string word = uni::lower_copy(std::string_view(line).substr(b, e - b));
        if (!uni::all_letters(word))
            throw data_error(path + ": stopword is not alphabetic: '" + word + "'");
        words.insert(std::move(word));
    }
    return words;
}

// Simplification pipeline: (1) lowercase, (2) every non-letter codepoint
// becomes a word separator, (3) stopwords dropped, (4) survivors stemmed.
// Any input is accepted; an all-symbol string yields no tokens.
inline TokenSeq normalize(std::string_view text, const NormalizerConfig& config) {
    TokenSeq out;
    std::string word;
    const auto flush = [&] {
        if (word.empty()) return;
        if (config.stopwords.find(word) == config.stopwords.end()) {
            out.tokens.push_back(config.stemmer.apply(word));
        }
        word.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = uni::decode(text, i);
        if (uni::is_letter(cp)) {
            uni::encode(uni::to_lower(cp), word);
        } else {
            flush();
        }
    }
    flush();
    return out;
}

// Row-parallel batched form; token order and ids are corpus order
// regardless of thread count.
inline std::vector<TokenSeq> normalize_corpus(const Corpus& corpus, const NormalizerConfig& config,
                                              int threads = 1) {
    std::vector<TokenSeq> out(corpus.size());
    parallel_for(corpus.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = normalize(corpus.documents[i].text, config);
            out[i].source_id = corpus.documents[i].id;
        }
    });
    return out;
}

inline NormalizerConfig NormalizerConfig::english() {
    static const char* const kEnglishStopwords[] = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
        "both", "but", "by", "can", "cannot", "could", "did", "do", "does", "doing", "down",
        "during", "each", "few", "for", "from", "further", "had", "has", "have", "having",
        "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my", "myself",
        "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
        "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
        "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
        "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
        "while", "who", "whom", "why", "with", "would", "you", "your", "yours", "yourself",
        "yourselves",
    };
    NormalizerConfig config;
    for (const char* word : kEnglishStopwords) config.stopwords.insert(word);
    config.stemmer = Stemmer::porter();
    return config;
}

}  // namespace textclust
