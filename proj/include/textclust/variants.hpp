#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "textclust/cluster.hpp"
#include "textclust/distance.hpp"
#include "textclust/error.hpp"
#include "textclust/features.hpp"
#include "textclust/rng.hpp"

namespace textclust {

// Medoid update: each centroid becomes the member row minimizing the
// summed distance to the rest of its cluster; ties keep the lowest row
// index. Empty clusters are reseeded like in the mean update.
inline std::vector<Centroid> update_medoids(const FeatureMatrix& m,
                                            const std::vector<std::uint32_t>& assignments,
                                            std::uint32_t k, Distance kind) {
    if (assignments.size() != m.n_rows())
        throw std::invalid_argument("assignments length does not match row count");
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        const std::uint32_t c = assignments[r];
        if (c >= k) throw std::invalid_argument("assignment index out of range");
        members[c].push_back(r);
    }
    std::vector<Centroid> centroids(k, Centroid(m.dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::uint32_t j = 0; j < k; ++j) {
        counts[j] = members[j].size();
        if (members[j].empty()) continue;
        std::size_t best_row = members[j][0];
        double best_sum = std::numeric_limits<double>::infinity();
        for (const std::size_t cand : members[j]) {
            double s = 0.0;
            for (const std::size_t other : members[j]) {
                if (other != cand) s += point_point_distance(m.rows[cand], m.rows[other], kind);
            }
            if (s < best_sum) {
                best_sum = s;
                best_row = cand;
            }
        }
        centroids[j] = dense_row(m.rows[best_row], m.dim);
    }
    detail::repair_empty_clusters(m, assignments, centroids, counts, kind);
    return centroids;
}

// Coordinate-wise median over binary members; even counts take the
// lower middle value, so a coordinate is 1 only when strictly more
// than half the members have it.
inline std::vector<Centroid> update_medians(const FeatureMatrix& m,
                                            const std::vector<std::uint32_t>& assignments,
                                            std::uint32_t k, Distance kind) {
    if (assignments.size() != m.n_rows())
        throw std::invalid_argument("assignments length does not match row count");
    std::vector<std::vector<std::uint64_t>> ones(k, std::vector<std::uint64_t>(m.dim, 0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        const std::uint32_t c = assignments[r];
        if (c >= k) throw std::invalid_argument("assignment index out of range");
        ++counts[c];
        for (const std::uint32_t i : m.rows[r].on) ++ones[c][i];
    }
    std::vector<Centroid> centroids(k, Centroid(m.dim, 0.0));
    for (std::uint32_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        for (std::size_t i = 0; i < m.dim; ++i) {
            if (2 * ones[j][i] > counts[j]) centroids[j][i] = 1.0;
        }
    }
    detail::repair_empty_clusters(m, assignments, centroids, counts, kind);
    return centroids;
}

inline ClusteringResult kmedoids_fit(const FeatureMatrix& m, std::uint32_t k, Distance kind,
                                     const FitParams& params, std::uint64_t seed) {
    return detail::lloyd_loop(m, k, kind, params, seed,
                              [kind](const FeatureMatrix& mx,
                                     const std::vector<std::uint32_t>& a,
                                     std::uint32_t kk) { return update_medoids(mx, a, kk, kind); });
}

inline ClusteringResult kmedian_fit(const FeatureMatrix& m, std::uint32_t k, Distance kind,
                                    const FitParams& params, std::uint64_t seed) {
    return detail::lloyd_loop(m, k, kind, params, seed,
                              [kind](const FeatureMatrix& mx,
                                     const std::vector<std::uint32_t>& a,
                                     std::uint32_t kk) { return update_medians(mx, a, kk, kind); });
}

// Streaming k-means over sampled batches. Each batch is drawn without
// replacement, assigned against the batch-start centroids, then each
// touched centroid moves toward its samples with a per-center rate of
// 1/(points that center has absorbed). Trace entries are per-batch
// sample costs, not full-corpus objectives; the final inertia comes
// from one exact full pass.
inline ClusteringResult minibatch_kmeans_fit(const FeatureMatrix& m, std::uint32_t k, Distance kind,
                                             std::uint32_t batch_size, std::uint32_t n_batches,
                                             const FitParams& params, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (k > m.n_rows()) throw std::invalid_argument("k exceeds row count");
    if (batch_size < 1 || batch_size > m.n_rows())
        throw std::invalid_argument("batch_size must be in [1, rows]");
    Rng rng(seed);
    ClusteringResult res;
    res.k = k;
    res.distance = kind;
    res.seed = seed;
    res.empty_rows = detail::find_empty_rows(m);
    res.centroids = init_centroids(m, k, params.init, kind, rng);
    std::vector<std::uint64_t> absorbed(k, 0);
    std::vector<std::size_t> idx(m.n_rows());
    std::vector<std::size_t> batch(batch_size);
    std::vector<std::uint32_t> batch_assign(batch_size);
    for (std::uint32_t b = 0; b < n_batches; ++b) {
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::uint32_t i = 0; i < batch_size; ++i) {
            const std::size_t pick = i + static_cast<std::size_t>(rng.next_index(idx.size() - i));
            std::swap(idx[i], idx[pick]);
            batch[i] = idx[i];
        }
        std::vector<CentroidStats> stats(k);
        for (std::uint32_t j = 0; j < k; ++j) stats[j] = centroid_stats(res.centroids[j]);
        double batch_cost = 0.0;
        for (std::uint32_t i = 0; i < batch_size; ++i) {
            std::uint32_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::uint32_t j = 0; j < k; ++j) {
                const double d =
                    point_centroid_distance(m.rows[batch[i]], res.centroids[j], stats[j], kind);
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            batch_assign[i] = best;
            batch_cost += best_d;
        }
        for (std::uint32_t i = 0; i < batch_size; ++i) {
            const std::uint32_t c = batch_assign[i];
            ++absorbed[c];
            const double eta = 1.0 / static_cast<double>(absorbed[c]);
            Centroid& mu = res.centroids[c];
            for (double& v : mu) v *= 1.0 - eta;
            for (const std::uint32_t on : m.rows[batch[i]].on) mu[on] += eta;
        }
        res.inertia_trace.push_back(batch_cost);
    }
    res.iterations_run = n_batches;
    res.assignments = assign(m, res.centroids, kind, params.threads);
    res.inertia = compute_inertia(m, res.assignments, res.centroids, kind, params.threads);
    return res;
}

enum class Variant { means, medoids, median, minibatch };

inline Variant parse_variant(const std::string& name) {
    if (name == "means") return Variant::means;
    if (name == "medoids") return Variant::medoids;
    if (name == "median") return Variant::median;
    if (name == "minibatch") return Variant::minibatch;
    throw data_error("unknown variant: " + name + " (expected means, medoids, median, minibatch)");
}

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::means: return "means";
        case Variant::medoids: return "medoids";
        case Variant::median: return "median";
        case Variant::minibatch: return "minibatch";
    }
    return "?";
}

struct FitConfig {
    Variant variant = Variant::means;
    Distance distance = Distance::sql2;
    FitParams params;
    std::uint32_t batch_size = 100;
    std::uint32_t n_batches = 100;
    std::uint32_t restarts = 1;
    std::uint64_t seed = 0;
};

inline ClusteringResult fit(const FeatureMatrix& m, std::uint32_t k, const FitConfig& cfg,
                            std::uint64_t seed) {
    switch (cfg.variant) {
        case Variant::means: return kmeans_fit(m, k, cfg.distance, cfg.params, seed);
        case Variant::medoids: return kmedoids_fit(m, k, cfg.distance, cfg.params, seed);
        case Variant::median: return kmedian_fit(m, k, cfg.distance, cfg.params, seed);
        case Variant::minibatch:
            return minibatch_kmeans_fit(m, k, cfg.distance, cfg.batch_size, cfg.n_batches,
                                        cfg.params, seed);
    }
    throw std::invalid_argument("unknown variant");
}

// Best of `restarts` independently seeded runs; the first run wins
// ties, and the winning run's derived seed is what the result records.
inline ClusteringResult fit_best(const FeatureMatrix& m, std::uint32_t k, const FitConfig& cfg) {
    if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    ClusteringResult best;
    bool have = false;
    for (std::uint32_t r = 0; r < cfg.restarts; ++r) {
        ClusteringResult run = fit(m, k, cfg, mix_seed(cfg.seed, r));
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

}  // namespace textclust
