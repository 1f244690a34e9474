#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "textclust/features.hpp"
#include "textclust/rng.hpp"
#include "textclust/variants.hpp"

namespace textclust {

struct ElbowPoint {
    std::uint32_t k = 0;
    double inertia = 0.0;     // best over that k's restarts
    std::uint32_t restarts = 1;
    std::uint64_t seed = 0;   // derived seed of the winning restart
};

struct ElbowCurve {
    std::vector<ElbowPoint> points;  // ks strictly increasing
    Distance distance = Distance::sql2;
};

// One best-of-restarts fit per k in [k_min, k_max]. Each k gets its own
// derived seed stream, so extending the range never perturbs the ks
// already computed.
inline ElbowCurve elbow_curve(const FeatureMatrix& m, std::uint32_t k_min, std::uint32_t k_max,
                              const FitConfig& cfg) {
    if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
    if (k_min > k_max) throw std::invalid_argument("k_min exceeds k_max");
    if (k_max > m.n_rows()) throw std::invalid_argument("k_max exceeds row count");
    ElbowCurve curve;
    curve.distance = cfg.distance;
    curve.points.reserve(k_max - k_min + 1);
    for (std::uint32_t k = k_min; k <= k_max; ++k) {
        FitConfig per_k = cfg;
        per_k.seed = mix_seed(cfg.seed, k);
        const ClusteringResult res = fit_best(m, k, per_k);
        curve.points.push_back(ElbowPoint{k, res.inertia, cfg.restarts, res.seed});
    }
    return curve;
}

}  // namespace textclust
