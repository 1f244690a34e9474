#include <gtest/gtest.h>

#include <stdexcept>

#include "textclust/elbow.hpp"

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace textclust;

namespace {

FeatureMatrix six_points() {
    // Two tight triples around (1,1,0,0)-ish and (0,0,1,1)-ish masks.
    return fixtures::make_matrix({{0, 1}, {0}, {0, 1, 2}, {2, 3}, {3}, {2, 3}}, 4);
}

FitConfig restarted(std::uint32_t restarts, std::uint64_t seed) {
    FitConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST(ElbowCurve, MatchesTheExhaustiveOptimumPerK) {
    const FeatureMatrix m = six_points();
    const ElbowCurve curve = elbow_curve(m, 1, 4, restarted(20, 77));
    ASSERT_EQ(curve.points.size(), 4u);
    for (const ElbowPoint& p : curve.points) {
        const double optimum = oracle::best_inertia(m, static_cast<int>(p.k));
        EXPECT_NEAR(p.inertia, optimum, 1e-9 + 1e-9 * optimum) << "k = " << p.k;
        EXPECT_EQ(p.restarts, 20u);
    }
}

TEST(ElbowCurve, InertiaNeverIncreasesWithK) {
    const FeatureMatrix m = fixtures::random_instance(40, 10, 23);
    const ElbowCurve curve = elbow_curve(m, 1, 8, restarted(10, 5));
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        EXPECT_LE(curve.points[i].inertia, curve.points[i - 1].inertia + 1e-9);
        EXPECT_EQ(curve.points[i].k, curve.points[i - 1].k + 1);
    }
}

TEST(ElbowCurve, SinglePointRangeWorks) {
    const FeatureMatrix m = six_points();
    const ElbowCurve curve = elbow_curve(m, 2, 2, restarted(5, 1));
    ASSERT_EQ(curve.points.size(), 1u);
    EXPECT_EQ(curve.points[0].k, 2u);
}

TEST(ElbowCurve, RejectsBadRanges) {
    const FeatureMatrix m = six_points();
    const FitConfig cfg = restarted(1, 0);
    EXPECT_THROW(elbow_curve(m, 0, 3, cfg), std::invalid_argument);
    EXPECT_THROW(elbow_curve(m, 3, 2, cfg), std::invalid_argument);
    EXPECT_THROW(elbow_curve(m, 1, 7, cfg), std::invalid_argument);
}

TEST(ElbowCurve, IsDeterministicForAFixedSeed) {
    const FeatureMatrix m = fixtures::random_instance(30, 8, 2);
    const ElbowCurve a = elbow_curve(m, 1, 5, restarted(4, 9));
    const ElbowCurve b = elbow_curve(m, 1, 5, restarted(4, 9));
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].inertia, b.points[i].inertia);
        EXPECT_EQ(a.points[i].seed, b.points[i].seed);
    }
}

TEST(ElbowCurve, ExtendingTheRangeKeepsEarlierPoints) {
    const FeatureMatrix m = fixtures::random_instance(30, 8, 2);
    const ElbowCurve narrow = elbow_curve(m, 2, 4, restarted(4, 9));
    const ElbowCurve wide = elbow_curve(m, 1, 6, restarted(4, 9));
    for (const ElbowPoint& p : narrow.points) {
        const ElbowPoint& q = wide.points[p.k - 1];
        EXPECT_EQ(q.k, p.k);
        EXPECT_EQ(q.inertia, p.inertia);
        EXPECT_EQ(q.seed, p.seed);
    }
}

TEST(ElbowCurve, BlobInstanceElbowsAtThree) {
    const FeatureMatrix m = fixtures::three_blobs(2026);
    FitConfig cfg = restarted(10, 99);
    const ElbowCurve curve = elbow_curve(m, 2, 4, cfg);
    const double d23 = curve.points[0].inertia - curve.points[1].inertia;
    const double d34 = curve.points[1].inertia - curve.points[2].inertia;
    EXPECT_GT(d23, 0.0);
    EXPECT_LT(d34, 0.25 * d23);
}
