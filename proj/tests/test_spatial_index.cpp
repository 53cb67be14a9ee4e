#include <gtest/gtest.h>

#include <limits>

#include "see/spatial_index.hpp"
#include "test_support.hpp"

namespace see {
namespace {

// Same expression order as the kernels, so membership is bit-identical.
std::vector<PointId> brute_force(std::span<const Vec3> pts, const Vec3& c, double r) {
    std::vector<PointId> out;
    const double r2 = r * r;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x() - c.x();
        const double dy = pts[i].y() - c.y();
        const double dz = pts[i].z() - c.z();
        if (dx * dx + dy * dy + dz * dz <= r2) out.push_back(static_cast<PointId>(i));
    }
    return out;
}

TEST(PointStore, EmptyBatchLeavesStoreUnchanged) {
    PointStore store(0.1);
    EXPECT_TRUE(store.insert_batch({}).empty());
    EXPECT_EQ(store.size(), 0u);
}

TEST(PointStore, FreshIdsAreDenseAndOrdered) {
    PointStore store(0.1);
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    EXPECT_EQ(store.insert_batch(pts), (std::vector<PointId>{0, 1, 2}));
    EXPECT_EQ(store.insert_batch(pts), (std::vector<PointId>{3, 4, 5}));
    EXPECT_EQ(store.position(4), Vec3(1, 0, 0));
}

TEST(PointStore, RejectsNonFiniteInput) {
    PointStore store(0.1);
    const std::vector<Vec3> bad{{0, 0, 0}, {std::numeric_limits<double>::quiet_NaN(), 0, 0}};
    EXPECT_THROW(store.insert_batch(bad), InputError);
    const std::vector<Vec3> inf{{std::numeric_limits<double>::infinity(), 0, 0}};
    EXPECT_THROW(store.insert_batch(inf), InputError);
    EXPECT_EQ(store.size(), 0u);
}

TEST(PointStore, RejectsNonPositiveRadius) {
    PointStore store(0.1);
    EXPECT_THROW(store.radius_query({0, 0, 0}, 0.0), InputError);
    EXPECT_THROW(store.radius_query({0, 0, 0}, -1.0), InputError);
    EXPECT_THROW(store.radius_count({0, 0, 0}, 0.0), InputError);
    EXPECT_THROW(store.any_within({0, 0, 0}, std::numeric_limits<double>::quiet_NaN()), InputError);
    EXPECT_THROW(PointStore(0.0), InputError);
}

TEST(PointStore, EmptyStoreQueries) {
    PointStore store(0.5);
    EXPECT_TRUE(store.radius_query({0, 0, 0}, 1.0).empty());
    EXPECT_FALSE(store.any_within({0, 0, 0}, 1.0));
    EXPECT_FALSE(store.nearest({0, 0, 0}).has_value());
}

TEST(PointStore, SelfInclusion) {
    PointStore store(0.5);
    store.insert_batch(std::vector<Vec3>{{0.3, -2, 7}});
    EXPECT_EQ(store.radius_query({0.3, -2, 7}, 1e-9), std::vector<PointId>{0});
}

TEST(PointStore, TwentySevenGridCentreHasSixAxisNeighbours) {
    PointStore store(1.0);
    std::vector<Vec3> pts;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) pts.emplace_back(i, j, k);
    store.insert_batch(pts);
    const std::vector<PointId> hits = store.radius_query({0, 0, 0}, 1.0);
    EXPECT_EQ(hits.size(), 7u);
    EXPECT_EQ(hits, brute_force(pts, {0, 0, 0}, 1.0));
}

TEST(PointStore, MatchesBruteForceOnRandomCloud) {
    Rng rng(3);
    std::vector<Vec3> pts;
    for (int i = 0; i < 1000; ++i) pts.emplace_back(rng.uniform(), rng.uniform(), rng.uniform());
    for (double cell : {0.02, 0.1, 0.5}) {
        PointStore store(cell);
        store.insert_batch(pts);
        for (int q = 0; q < 100; ++q) {
            const Vec3 c(rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2));
            const double r = rng.uniform(0.001, 0.6);
            const std::vector<PointId> expect = brute_force(pts, c, r);
            EXPECT_EQ(store.radius_query(c, r), expect);
            EXPECT_EQ(store.radius_count(c, r), expect.size());
            EXPECT_EQ(store.radius_count(c, r, 5), std::min<std::size_t>(expect.size(), 5));
            EXPECT_EQ(store.any_within(c, r), !expect.empty());
        }
    }
}

TEST(PointStore, QueriesOnStoredPointsIncludeBoundary) {
    // Points exactly r apart along an axis: closed ball keeps them.
    PointStore store(0.25);
    const std::vector<Vec3> pts{{0, 0, 0}, {0.5, 0, 0}, {0, -0.5, 0}, {0, 0, 0.5}};
    store.insert_batch(pts);
    EXPECT_EQ(store.radius_query({0, 0, 0}, 0.5).size(), 4u);
    EXPECT_EQ(store.radius_query({0, 0, 0}, std::nextafter(0.5, 0.0)).size(), 1u);
}

TEST(PointStore, InterleavedInsertsMatchBatchInsert) {
    Rng rng(8);
    const std::vector<Vec3> pts = test::random_cloud(rng, 600, 1.0);
    PointStore batch(0.1), incremental(0.1);
    batch.insert_batch(pts);
    for (std::size_t i = 0; i < pts.size(); i += 50) {
        incremental.insert_batch(std::span(pts).subspan(i, 50));
        const Vec3 c = pts[rng.next() % (i + 50)];
        EXPECT_EQ(incremental.radius_query(c, 0.2), brute_force(std::span(pts).first(i + 50), c, 0.2));
    }
    for (int q = 0; q < 50; ++q) {
        const Vec3 c = test::random_cloud(rng, 1, 1.0)[0];
        EXPECT_EQ(incremental.radius_query(c, 0.3), batch.radius_query(c, 0.3));
    }
}

TEST(PointStore, LargeRadiusAndNegativeCoordinates) {
    Rng rng(12);
    const std::vector<Vec3> pts = test::random_cloud(rng, 300, 50.0);
    PointStore store(0.05);
    store.insert_batch(pts);
    EXPECT_EQ(store.radius_query({-10, 5, 0}, 40.0), brute_force(pts, {-10, 5, 0}, 40.0));
    EXPECT_EQ(store.radius_query({0, 0, 0}, 1000.0).size(), pts.size());
}

TEST(PointStore, NearestMatchesBruteForceAndBreaksTiesLow) {
    Rng rng(21);
    const std::vector<Vec3> pts = test::random_cloud(rng, 500, 1.0);
    PointStore store(0.05);
    store.insert_batch(pts);
    for (int q = 0; q < 100; ++q) {
        const Vec3 c = 3.0 * test::random_cloud(rng, 1, 1.0)[0];
        PointId best = 0;
        for (PointId i = 1; i < pts.size(); ++i) {
            if ((pts[i] - c).squaredNorm() < (pts[best] - c).squaredNorm()) best = i;
        }
        EXPECT_EQ(store.nearest(c), best);
    }
    PointStore ties(1.0);
    ties.insert_batch(std::vector<Vec3>{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}});
    EXPECT_EQ(ties.nearest({0, 0, 0}), PointId{0});
}

} // namespace
} // namespace see
