#pragma once

// Shared test inputs: the two-sentence Portuguese corpus the feature
// docs are checked against, random binary instances for the oracle
// suites, and a three-blob synthetic dataset with a known elbow.

#include <cstdint>
#include <string>
#include <vector>

#include "textclust/corpus.hpp"
#include "textclust/features.hpp"
#include "textclust/normalize.hpp"
#include "textclust/rng.hpp"
#include "textclust/stemmer.hpp"

namespace fixtures {

inline textclust::NormalizerConfig sentence_normalizer() {
    textclust::NormalizerConfig cfg;
    cfg.stopwords = {"de", "a"};
    cfg.stemmer = textclust::Stemmer::table(
        {{"gosta", "gost"}, {"assistir", "assist"}, {"filmes", "film"}, {"jogos", "jog"}},
        "fixture");
    return cfg;
}

inline const char* kSentence1 = "João gosta de assistir a filmes. Maria gosta de filmes também.";
inline const char* kSentence2 = "João também gosta de assistir a jogos de futebol.";

inline textclust::Corpus sentence_corpus() {
    textclust::Corpus corpus;
    corpus.source = "inline";
    corpus.documents.push_back(textclust::Document{0, std::nullopt, kSentence1});
    corpus.documents.push_back(textclust::Document{1, std::nullopt, kSentence2});
    return corpus;
}

inline textclust::FeatureMatrix make_matrix(std::vector<std::vector<std::uint32_t>> rows,
                                            std::size_t dim) {
    textclust::FeatureMatrix m;
    m.dim = dim;
    for (auto& r : rows)
        m.rows.push_back(textclust::SparseBinaryVector{std::move(r)});
    return m;
}

// Random binary matrix with iid on-bits, for the brute-force suites.
inline textclust::FeatureMatrix random_instance(std::size_t rows, std::size_t dim,
                                                std::uint64_t seed, double p_on = 0.5) {
    textclust::Rng rng(seed);
    textclust::FeatureMatrix m;
    m.dim = dim;
    m.rows.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::uint32_t i = 0; i < dim; ++i) {
            if (rng.next_unit() < p_on) m.rows[r].on.push_back(i);
        }
    }
    return m;
}

// Three well-separated binary blobs: blob b owns coordinates
// [8b, 8b+8), switched on with probability 0.9; everything else is
// background noise at 0.05. 100 points per blob, dim 24.
inline textclust::FeatureMatrix three_blobs(std::uint64_t seed,
                                            std::vector<std::uint32_t>* truth = nullptr) {
    constexpr std::size_t kPerBlob = 100, kBlobs = 3, kOwned = 8;
    constexpr double kPOn = 0.9, kPNoise = 0.05;
    textclust::Rng rng(seed);
    textclust::FeatureMatrix m;
    m.dim = kBlobs * kOwned;
    if (truth) truth->clear();
    for (std::size_t b = 0; b < kBlobs; ++b) {
        for (std::size_t p = 0; p < kPerBlob; ++p) {
            textclust::SparseBinaryVector v;
            for (std::uint32_t i = 0; i < m.dim; ++i) {
                const bool owned = i >= b * kOwned && i < (b + 1) * kOwned;
                if (rng.next_unit() < (owned ? kPOn : kPNoise)) v.on.push_back(i);
            }
            m.rows.push_back(std::move(v));
            if (truth) truth->push_back(static_cast<std::uint32_t>(b));
        }
    }
    return m;
}

}  // namespace fixtures
