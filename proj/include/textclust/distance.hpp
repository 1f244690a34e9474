#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "textclust/error.hpp"
#include "textclust/features.hpp"

namespace textclust {

enum class Distance { sql2, l2, l1, cosine };

inline Distance parse_distance(const std::string& name) {
    if (name == "sql2") return Distance::sql2;
    if (name == "l2") return Distance::l2;
    if (name == "l1") return Distance::l1;
    if (name == "cosine") return Distance::cosine;
    throw data_error("unknown distance: " + name + " (expected sql2, l2, l1, cosine)");
}

inline const char* distance_name(Distance d) {
    switch (d) {
        case Distance::sql2: return "sql2";
        case Distance::l2: return "l2";
        case Distance::l1: return "l1";
        case Distance::cosine: return "cosine";
    }
    return "?";
}

using Centroid = std::vector<double>;

// Per-centroid sums reused across every point in an assignment sweep.
struct CentroidStats {
    double sq_norm = 0.0;  // sum mu_i^2
    double abs_sum = 0.0;  // sum |mu_i|
    double norm = 0.0;
};

inline CentroidStats centroid_stats(const Centroid& mu) {
    CentroidStats s;
    for (const double v : mu) {
        s.sq_norm += v * v;
        s.abs_sum += std::abs(v);
    }
    s.norm = std::sqrt(s.sq_norm);
    return s;
}

// Distance from a binary sparse row to a dense centroid. For a binary
// x, ||x||^2 = nnz and sum|x_i| = nnz, so only the on coordinates of
// mu need touching.
inline double point_centroid_distance(const SparseBinaryVector& x, const Centroid& mu,
                                      const CentroidStats& s, Distance kind) {
    switch (kind) {
        case Distance::sql2:
        case Distance::l2: {
            double dot = 0.0;
            for (const std::uint32_t i : x.on) dot += mu[i];
            const double d2 = static_cast<double>(x.nnz()) - 2.0 * dot + s.sq_norm;
            if (kind == Distance::sql2) return d2 < 0.0 ? 0.0 : d2;
            return d2 < 0.0 ? 0.0 : std::sqrt(d2);
        }
        case Distance::l1: {
            // |1 - mu_i| replaces |mu_i| on the on coordinates.
            double d = s.abs_sum;
            for (const std::uint32_t i : x.on) d += std::abs(1.0 - mu[i]) - std::abs(mu[i]);
            return d < 0.0 ? 0.0 : d;
        }
        case Distance::cosine: {
            const double xn = std::sqrt(static_cast<double>(x.nnz()));
            if (xn == 0.0 || s.norm == 0.0) return 1.0;
            double dot = 0.0;
            for (const std::uint32_t i : x.on) dot += mu[i];
            return 1.0 - dot / (xn * s.norm);
        }
    }
    return 0.0;
}

inline double point_centroid_distance(const SparseBinaryVector& x, const Centroid& mu,
                                      Distance kind) {
    return point_centroid_distance(x, mu, centroid_stats(mu), kind);
}

namespace detail {

inline std::size_t intersection_size(const SparseBinaryVector& a, const SparseBinaryVector& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.on.size() && j < b.on.size()) {
        if (a.on[i] < b.on[j]) ++i;
        else if (a.on[i] > b.on[j]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

}  // namespace detail

// Distance between two binary rows. For binary data l1 and sql2
// coincide (both count the symmetric difference).
inline double point_point_distance(const SparseBinaryVector& a, const SparseBinaryVector& b,
                                   Distance kind) {
    const double common = static_cast<double>(detail::intersection_size(a, b));
    const double diff = static_cast<double>(a.nnz()) + static_cast<double>(b.nnz()) - 2.0 * common;
    switch (kind) {
        case Distance::sql2:
        case Distance::l1: return diff;
        case Distance::l2: return std::sqrt(diff);
        case Distance::cosine: {
            if (a.nnz() == 0 || b.nnz() == 0) return 1.0;
            // one sqrt over the integer product keeps identical rows at exactly 0
            const double norms = std::sqrt(static_cast<double>(a.nnz()) *
                                           static_cast<double>(b.nnz()));
            return 1.0 - common / norms;
        }
    }
    return 0.0;
}

}  // namespace textclust
