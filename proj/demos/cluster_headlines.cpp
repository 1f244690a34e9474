// End-to-end tour on a tiny inline corpus: normalize, build a 1-gram
// dictionary, vectorize, cluster with two centers, print what fell where.

#include <cstdio>

#include "textclust/textclust.hpp"

using namespace textclust;

int main() {
    Corpus corpus;
    corpus.source = "inline";
    const char* headlines[] = {
        "police investigate fatal crash on highway",
        "police arrest man after city robbery",
        "police search for missing hiker continues",
        "fire crews battle house fire overnight",
        "firefighters contain bushfire near town",
        "fire warning issued for northern region",
    };
    for (std::size_t i = 0; i < 6; ++i)
        corpus.documents.push_back(Document{static_cast<std::int64_t>(i), std::nullopt,
                                            headlines[i]});

    const NormalizerConfig norm = NormalizerConfig::english();
    const std::vector<TokenSeq> tokens = normalize_corpus(corpus, norm);

    const NGramDictionary dict = build_dictionary(tokens, 1);
    const FeatureSpace space = select_features(dict, 1);
    const FeatureMatrix matrix = vectorize_corpus(tokens, space);
    std::printf("documents=%zu features=%zu\n", matrix.n_rows(), matrix.dim);

    FitConfig cfg;
    cfg.restarts = 10;
    cfg.seed = 42;
    const ClusteringResult result = fit_best(matrix, 2, cfg);
    std::printf("inertia=%.4f iterations=%u\n", result.inertia, result.iterations_run);

    for (std::uint32_t c = 0; c < result.k; ++c) {
        const TermRanking ranking = top_terms(matrix, result, c, 3);
        std::printf("cluster %u (top terms:", c);
        for (const auto& [term, count] : ranking.terms)
            std::printf(" %s:%zu", term.c_str(), count);
        std::printf(")\n");
        for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
            if (result.assignments[r] == c) std::printf("  %s\n", headlines[r]);
        }
    }
    return 0;
}
