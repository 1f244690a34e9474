#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "textclust/distance.hpp"
#include "textclust/error.hpp"
#include "textclust/features.hpp"
#include "textclust/parallel.hpp"
#include "textclust/rng.hpp"

namespace textclust {

enum class InitMethod { kpp, random_rows, first_k };

inline InitMethod parse_init(const std::string& name) {
    if (name == "kpp") return InitMethod::kpp;
    if (name == "random") return InitMethod::random_rows;
    if (name == "firstk") return InitMethod::first_k;
    throw data_error("unknown init method: " + name + " (expected kpp, random, firstk)");
}

inline const char* init_name(InitMethod m) {
    switch (m) {
        case InitMethod::kpp: return "kpp";
        case InitMethod::random_rows: return "random";
        case InitMethod::first_k: return "firstk";
    }
    return "?";
}

struct FitParams {
    InitMethod init = InitMethod::kpp;
    std::uint32_t max_iter = 300;
    double tol = 1e-4;
    unsigned threads = 1;
};

struct ClusteringResult {
    std::uint32_t k = 0;
    Distance distance = Distance::sql2;
    std::vector<Centroid> centroids;
    std::vector<std::uint32_t> assignments;
    double inertia = 0.0;
    std::uint32_t iterations_run = 0;
    std::vector<double> inertia_trace;  // objective after each iteration
    std::uint64_t seed = 0;
    bool converged = false;
    // Rows with no features at all; under cosine they sit at distance 1
    // from everything, so reports want them called out.
    std::vector<std::size_t> empty_rows;
};

inline Centroid dense_row(const SparseBinaryVector& row, std::size_t dim) {
    Centroid c(dim, 0.0);
    for (const std::uint32_t i : row.on) c[i] = 1.0;
    return c;
}

// Nearest-centroid assignment; ties go to the lowest centroid index.
inline std::vector<std::uint32_t> assign(const FeatureMatrix& m,
                                         const std::vector<Centroid>& centroids, Distance kind,
                                         unsigned threads = 1) {
    if (centroids.empty()) throw std::invalid_argument("assign requires at least one centroid");
    for (const Centroid& c : centroids) {
        if (c.size() != m.dim) throw std::invalid_argument("centroid dim does not match matrix");
    }
    std::vector<CentroidStats> stats(centroids.size());
    for (std::size_t j = 0; j < centroids.size(); ++j) stats[j] = centroid_stats(centroids[j]);
    std::vector<std::uint32_t> out(m.n_rows());
    parallel_for(m.n_rows(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            std::uint32_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < centroids.size(); ++j) {
                const double d = point_centroid_distance(m.rows[r], centroids[j], stats[j], kind);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::uint32_t>(j);
                }
            }
            out[r] = best;
        }
    });
    return out;
}

inline double compute_inertia(const FeatureMatrix& m, const std::vector<std::uint32_t>& assignments,
                              const std::vector<Centroid>& centroids, Distance kind,
                              unsigned threads = 1) {
    if (assignments.size() != m.n_rows())
        throw std::invalid_argument("assignments length does not match row count");
    for (const Centroid& c : centroids) {
        if (c.size() != m.dim) throw std::invalid_argument("centroid dim does not match matrix");
    }
    std::vector<CentroidStats> stats(centroids.size());
    for (std::size_t j = 0; j < centroids.size(); ++j) stats[j] = centroid_stats(centroids[j]);
    // Per-row distances first, fixed-order sum after: the total is
    // bitwise independent of thread count.
    std::vector<double> per_row(m.n_rows());
    parallel_for(m.n_rows(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const std::uint32_t c = assignments[r];
            if (c >= centroids.size()) throw std::invalid_argument("assignment index out of range");
            per_row[r] = point_centroid_distance(m.rows[r], centroids[c], stats[c], kind);
        }
    });
    double total = 0.0;
    for (const double d : per_row) total += d;
    return total;
}

namespace detail {

// Reseed each empty cluster with the unused row farthest from its own
// (non-empty) cluster's centroid. Assignments are not touched; the next
// assignment sweep captures the row at distance zero.
inline void repair_empty_clusters(const FeatureMatrix& m,
                                  const std::vector<std::uint32_t>& assignments,
                                  std::vector<Centroid>& centroids,
                                  const std::vector<std::size_t>& counts, Distance kind) {
    std::vector<std::uint32_t> empties;
    for (std::uint32_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) empties.push_back(j);
    }
    if (empties.empty()) return;
    std::vector<double> dist_own(m.n_rows());
    std::vector<CentroidStats> stats(centroids.size());
    for (std::size_t j = 0; j < centroids.size(); ++j) stats[j] = centroid_stats(centroids[j]);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        const std::uint32_t c = assignments[r];
        dist_own[r] = point_centroid_distance(m.rows[r], centroids[c], stats[c], kind);
    }
    std::vector<char> used(m.n_rows(), 0);
    for (const std::uint32_t j : empties) {
        std::size_t pick = m.n_rows();
        double best = -1.0;
        for (std::size_t r = 0; r < m.n_rows(); ++r) {
            if (!used[r] && dist_own[r] > best) {
                best = dist_own[r];
                pick = r;
            }
        }
        if (pick == m.n_rows()) break;
        used[pick] = 1;
        centroids[j] = dense_row(m.rows[pick], m.dim);
    }
}

}  // namespace detail

// Mean update per Eq.-style arithmetic means. Coordinate sums over 0/1
// members are integer counts, so the result does not depend on row
// order; the single division happens at the end.
inline std::vector<Centroid> update_means(const FeatureMatrix& m,
                                          const std::vector<std::uint32_t>& assignments,
                                          std::uint32_t k,
                                          Distance repair_distance = Distance::sql2) {
    if (assignments.size() != m.n_rows())
        throw std::invalid_argument("assignments length does not match row count");
    std::vector<std::vector<std::uint64_t>> sums(k, std::vector<std::uint64_t>(m.dim, 0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        const std::uint32_t c = assignments[r];
        if (c >= k) throw std::invalid_argument("assignment index out of range");
        ++counts[c];
        for (const std::uint32_t i : m.rows[r].on) ++sums[c][i];
    }
    std::vector<Centroid> centroids(k, Centroid(m.dim, 0.0));
    for (std::uint32_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        const double inv = 1.0 / static_cast<double>(counts[j]);
        for (std::size_t i = 0; i < m.dim; ++i)
            centroids[j][i] = static_cast<double>(sums[j][i]) * inv;
    }
    detail::repair_empty_clusters(m, assignments, centroids, counts, repair_distance);
    return centroids;
}

inline std::vector<Centroid> init_centroids(const FeatureMatrix& m, std::uint32_t k,
                                            InitMethod method, Distance kind, Rng& rng) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (k > m.n_rows()) throw std::invalid_argument("k exceeds row count");
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    switch (method) {
        case InitMethod::first_k: {
            for (std::size_t r = 0; r < k; ++r) chosen.push_back(r);
            break;
        }
        case InitMethod::random_rows: {
            // Partial Fisher-Yates over the row index array.
            std::vector<std::size_t> idx(m.n_rows());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (std::uint32_t j = 0; j < k; ++j) {
                const std::size_t pick = j + static_cast<std::size_t>(
                                                 rng.next_index(idx.size() - j));
                std::swap(idx[j], idx[pick]);
                chosen.push_back(idx[j]);
            }
            break;
        }
        case InitMethod::kpp: {
            // D^2-weighted seeding. sql2 is already a squared distance,
            // so it is its own weight; the other kinds get squared.
            chosen.push_back(static_cast<std::size_t>(rng.next_index(m.n_rows())));
            std::vector<double> min_d(m.n_rows(), std::numeric_limits<double>::infinity());
            std::vector<char> taken(m.n_rows(), 0);
            taken[chosen[0]] = 1;
            while (chosen.size() < k) {
                const SparseBinaryVector& last = m.rows[chosen.back()];
                double total = 0.0;
                for (std::size_t r = 0; r < m.n_rows(); ++r) {
                    const double d = point_point_distance(m.rows[r], last, kind);
                    if (d < min_d[r]) min_d[r] = d;
                    if (!taken[r]) {
                        const double w = (kind == Distance::sql2) ? min_d[r] : min_d[r] * min_d[r];
                        total += w;
                    }
                }
                std::size_t pick = m.n_rows();
                if (total > 0.0) {
                    const double target = rng.next_unit() * total;
                    double acc = 0.0;
                    for (std::size_t r = 0; r < m.n_rows(); ++r) {
                        if (taken[r]) continue;
                        const double w = (kind == Distance::sql2) ? min_d[r] : min_d[r] * min_d[r];
                        acc += w;
                        if (acc > target) {
                            pick = r;
                            break;
                        }
                    }
                }
                if (pick == m.n_rows()) {
                    // All remaining rows coincide with a chosen center;
                    // fall back to a uniform pick among them.
                    std::size_t free_count = 0;
                    for (std::size_t r = 0; r < m.n_rows(); ++r)
                        if (!taken[r]) ++free_count;
                    std::size_t nth = static_cast<std::size_t>(rng.next_index(free_count));
                    for (std::size_t r = 0; r < m.n_rows(); ++r) {
                        if (taken[r]) continue;
                        if (nth == 0) {
                            pick = r;
                            break;
                        }
                        --nth;
                    }
                }
                taken[pick] = 1;
                chosen.push_back(pick);
            }
            break;
        }
    }
    std::vector<Centroid> out;
    out.reserve(k);
    for (const std::size_t r : chosen) out.push_back(dense_row(m.rows[r], m.dim));
    return out;
}

namespace detail {

inline std::vector<std::size_t> find_empty_rows(const FeatureMatrix& m) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        if (m.rows[r].nnz() == 0) out.push_back(r);
    }
    return out;
}

// Shared Lloyd alternation. `update` maps (matrix, assignments, k) to
// fresh centroids and owns empty-cluster handling. Stops when the
// assignment sweep repeats, the relative objective change drops to tol,
// or max_iter passes complete.
template <typename UpdateFn>
ClusteringResult lloyd_loop(const FeatureMatrix& m, std::uint32_t k, Distance kind,
                            const FitParams& params, std::uint64_t seed, UpdateFn update) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (k > m.n_rows()) throw std::invalid_argument("k exceeds row count");
    if (params.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    Rng rng(seed);
    ClusteringResult res;
    res.k = k;
    res.distance = kind;
    res.seed = seed;
    res.empty_rows = find_empty_rows(m);
    res.centroids = init_centroids(m, k, params.init, kind, rng);
    double j_prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t iter = 0; iter < params.max_iter; ++iter) {
        std::vector<std::uint32_t> next = assign(m, res.centroids, kind, params.threads);
        if (iter > 0 && next == res.assignments) {
            res.converged = true;
            break;
        }
        res.assignments = std::move(next);
        res.centroids = update(m, res.assignments, k);
        const double j = compute_inertia(m, res.assignments, res.centroids, kind, params.threads);
        res.inertia_trace.push_back(j);
        std::vector<std::size_t> counts(k, 0);
        for (const std::uint32_t c : res.assignments) ++counts[c];
        const bool repaired = std::find(counts.begin(), counts.end(), std::size_t{0}) != counts.end();
        // A freshly reseeded centroid has no members yet; give the next
        // sweep a chance to hand it the stolen row before stopping.
        if (!repaired && std::isfinite(j_prev) && std::abs(j_prev - j) <= params.tol * j_prev) {
            res.converged = true;
            break;
        }
        j_prev = j;
    }
    res.iterations_run = static_cast<std::uint32_t>(res.inertia_trace.size());
    res.inertia = res.inertia_trace.empty() ? 0.0 : res.inertia_trace.back();
    return res;
}

}  // namespace detail

inline ClusteringResult kmeans_fit(const FeatureMatrix& m, std::uint32_t k, Distance kind,
                                   const FitParams& params, std::uint64_t seed) {
    return detail::lloyd_loop(m, k, kind, params, seed,
                              [kind](const FeatureMatrix& mx,
                                     const std::vector<std::uint32_t>& a,
                                     std::uint32_t kk) { return update_means(mx, a, kk, kind); });
}

}  // namespace textclust
