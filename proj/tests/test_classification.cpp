#include <gtest/gtest.h>

#include <chrono>
#include <numbers>

#include "see/classification.hpp"
#include "test_support.hpp"

namespace see {
namespace {

using test::oracle;

void expect_partition(const ClassifiedCloud& cloud) {
    std::size_t counts[3] = {0, 0, 0};
    for (Label l : cloud.labels()) ++counts[static_cast<int>(l)];
    EXPECT_EQ(counts[0], cloud.count(Label::core));
    EXPECT_EQ(counts[1], cloud.count(Label::frontier));
    EXPECT_EQ(counts[2], cloud.count(Label::outlier));
    EXPECT_EQ(counts[0] + counts[1] + counts[2], cloud.size());
    EXPECT_EQ(cloud.frontier_set().size(), cloud.count(Label::frontier));
    for (PointId id : cloud.frontier_set()) EXPECT_EQ(cloud.label(id), Label::frontier);
}

TEST(KMin, Examples) {
    EXPECT_EQ(compute_k_min(4000, 0.02), 2u);
    EXPECT_EQ(compute_k_min(3.0 / (4.0 * std::numbers::pi), 1.0), 2u);
    EXPECT_EQ(compute_k_min(60, 0.2), 3u);
    EXPECT_EQ(compute_k_min(298500, 0.02), 11u);  // 10.003 rounds up
}

TEST(KMin, RejectsNonPositive) {
    EXPECT_THROW(compute_k_min(0, 0.02), InputError);
    EXPECT_THROW(compute_k_min(100, -1), InputError);
    EXPECT_THROW(compute_k_min(std::numeric_limits<double>::quiet_NaN(), 1), InputError);
}

TEST(Classification, EmptyIngestGivesEmptyDelta) {
    ClassifiedCloud cloud(0.1, 3);
    EXPECT_TRUE(cloud.ingest({}).empty());
    EXPECT_TRUE(cloud.frontier_set().empty());
}

TEST(Classification, FourCollinearPoints) {
    const std::vector<Vec3> pts{{0, 0, 0}, {0.9, 0, 0}, {1.8, 0, 0}, {10, 0, 0}};
    const std::vector<Label> expect = oracle(pts, 1.0, 3);
    // Frozen from the oracle: only the middle point has three neighbours, and
    // neither end point has a second sparse neighbour.
    ASSERT_EQ(expect, (std::vector<Label>{Label::outlier, Label::core, Label::outlier, Label::outlier}));
    ClassifiedCloud cloud(1.0, 3);
    const ClassificationDelta d = cloud.ingest(pts);
    EXPECT_EQ(std::vector<Label>(cloud.labels().begin(), cloud.labels().end()), expect);
    EXPECT_TRUE(cloud.frontier_set().empty());
    EXPECT_EQ(d.core, std::vector<PointId>{1});
    EXPECT_EQ(d.outlier, (std::vector<PointId>{0, 2, 3}));
}

TEST(Classification, FrontierNeedsCoreAndSparseNeighbour) {
    // Clump of 4 on the negative x axis, then a chain of sparse points leaving it.
    const std::vector<Vec3> pts{{0, 0, 0}, {-0.01, 0, 0}, {-0.02, 0, 0}, {-0.03, 0, 0},
                                {0.095, 0, 0}, {0.19, 0, 0}, {0.285, 0, 0}};
    ClassifiedCloud cloud(0.1, 4);
    cloud.ingest(pts);
    EXPECT_EQ(cloud.label(0), Label::core);
    EXPECT_EQ(cloud.label(3), Label::core);
    EXPECT_EQ(cloud.label(4), Label::frontier);  // core 0 and sparse 5 in range
    EXPECT_EQ(cloud.label(5), Label::outlier);
    EXPECT_EQ(cloud.label(6), Label::outlier);
    EXPECT_EQ(cloud.frontier_set(), std::set<PointId>{4});
}

TEST(Classification, DenseCloudIsAllCore) {
    Rng rng(2);
    const std::vector<Vec3> pts = test::random_cloud(rng, 200, 0.01);
    ClassifiedCloud cloud(0.1, 10);
    cloud.ingest(pts);
    EXPECT_EQ(cloud.count(Label::core), pts.size());
    EXPECT_TRUE(cloud.frontier_set().empty());
}

TEST(Classification, NeighbourCountSaturatesAtKMin) {
    const std::vector<Vec3> pts{{0, 0, 0}, {0.01, 0, 0}, {0.02, 0, 0}, {0.03, 0, 0}, {5, 0, 0}};
    ClassifiedCloud cloud(0.1, 3);
    cloud.ingest(pts);
    EXPECT_EQ(cloud.neighbour_count(0), 3u);
    EXPECT_EQ(cloud.neighbour_count(4), 1u);
}

TEST(Classification, IncrementalMatchesOracleOnRandomBatches) {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 50 + rng.next() % 600;
        const double r = rng.uniform(0.05, 0.2);
        const std::size_t k_min = 2 + rng.next() % 19;
        std::vector<Vec3> pts = test::random_cloud(rng, n, 0.5);
        // A few duplicates exercise zero-distance neighbours.
        for (int i = 0; i < 5; ++i) pts[rng.next() % n] = pts[rng.next() % n];

        ClassifiedCloud cloud(r, k_min);
        const std::size_t batches = 1 + rng.next() % 10;
        std::size_t done = 0;
        std::vector<std::size_t> core_before;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t take = b + 1 == batches ? n - done : (n - done) / (batches - b);
            cloud.ingest(std::span(pts).subspan(done, take));
            done += take;
            expect_partition(cloud);
            for (std::size_t id : core_before) EXPECT_EQ(cloud.label(static_cast<PointId>(id)), Label::core);
            core_before.clear();
            for (PointId id = 0; id < cloud.size(); ++id) {
                if (cloud.label(id) == Label::core) core_before.push_back(id);
            }
            const auto expect = oracle(std::span(pts).first(done), r, k_min);
            ASSERT_EQ(std::vector<Label>(cloud.labels().begin(), cloud.labels().end()), expect)
                << "trial " << trial << " batch " << b;
        }
    }
}

TEST(Classification, DeltaReportsExactlyTheChangedLabels) {
    Rng rng(4);
    const std::vector<Vec3> pts = test::random_cloud(rng, 400, 0.3);
    ClassifiedCloud cloud(0.1, 6);
    std::vector<Label> before;
    for (std::size_t i = 0; i < pts.size(); i += 80) {
        const ClassificationDelta d = cloud.ingest(std::span(pts).subspan(i, 80));
        std::vector<PointId> changed;
        for (PointId id = 0; id < cloud.size(); ++id) {
            if (id >= before.size() || before[id] != cloud.label(id)) changed.push_back(id);
        }
        std::vector<PointId> reported;
        for (const auto* group : {&d.core, &d.frontier, &d.outlier}) reported.insert(reported.end(), group->begin(), group->end());
        std::sort(reported.begin(), reported.end());
        EXPECT_EQ(reported, changed);
        for (PointId id : d.frontier) EXPECT_EQ(cloud.label(id), Label::frontier);
        before.assign(cloud.labels().begin(), cloud.labels().end());
    }
}

TEST(Classification, SameBatchesGiveSameLabels) {
    Rng rng(17);
    const std::vector<Vec3> pts = test::random_cloud(rng, 500, 0.4);
    ClassifiedCloud a(0.1, 5), b(0.1, 5);
    for (std::size_t i = 0; i < pts.size(); i += 100) {
        a.ingest(std::span(pts).subspan(i, 100));
        b.ingest(std::span(pts).subspan(i, 100));
    }
    EXPECT_TRUE(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin()));
}

class Suppression : public ::testing::Test {
protected:
    // Core clump of 5, frontier 5 (three points in its ball) and its sparse partner 6.
    std::vector<Vec3> pts{{0, 0, 0}, {-0.01, 0, 0}, {-0.02, 0, 0}, {-0.03, 0, 0}, {-0.04, 0, 0},
                          {0.095, 0, 0}, {0.19, 0, 0}};
    ClassifiedCloud cloud{0.1, 5};
    void SetUp() override {
        cloud.ingest(pts);
        ASSERT_EQ(cloud.label(5), Label::frontier);
        ASSERT_EQ(cloud.label(6), Label::outlier);
    }
};

TEST_F(Suppression, RemovesFromFrontierSet) {
    cloud.suppress(5);
    EXPECT_TRUE(cloud.suppressed(5));
    EXPECT_EQ(cloud.label(5), Label::outlier);
    EXPECT_TRUE(cloud.frontier_set().empty());
    expect_partition(cloud);
}

TEST_F(Suppression, FarBatchKeepsFlag) {
    cloud.suppress(5);
    cloud.ingest(std::vector<Vec3>{{5, 5, 5}});
    EXPECT_TRUE(cloud.suppressed(5));
    EXPECT_EQ(cloud.label(5), Label::outlier);
}

TEST_F(Suppression, NearbyPointClearsFlag) {
    cloud.suppress(5);
    cloud.ingest(std::vector<Vec3>{{0.12, 0.05, 0}});
    EXPECT_FALSE(cloud.suppressed(5));
    EXPECT_EQ(cloud.label(5), Label::frontier);
}

TEST_F(Suppression, SuppressedPointStillCountsAsNeighbour) {
    cloud.suppress(6);
    EXPECT_EQ(cloud.label(5), Label::frontier);  // 6 is still a sparse neighbour of 5
}

TEST_F(Suppression, CorePointCannotBeSuppressed) {
    EXPECT_THROW(cloud.suppress(0), ContractViolation);
    EXPECT_THROW(cloud.suppress(100), InputError);
}

TEST_F(Suppression, UnsuppressNearWithoutSuppressedPointsIsNoOp) {
    const std::vector<Label> before(cloud.labels().begin(), cloud.labels().end());
    cloud.unsuppress_near({0.095, 0, 0});
    EXPECT_TRUE(std::equal(before.begin(), before.end(), cloud.labels().begin()));
    cloud.suppress(5);
    cloud.unsuppress_near({0.095, 0, 0});
    EXPECT_FALSE(cloud.suppressed(5));
    EXPECT_EQ(cloud.label(5), Label::frontier);
}

TEST(Classification, BatchHelperMatchesOracle) {
    Rng rng(31);
    const std::vector<Vec3> pts = test::random_cloud(rng, 800, 0.5);
    EXPECT_EQ(classify(pts, 0.12, 7), oracle(pts, 0.12, 7));
}

TEST(Classification, RejectsBadParameters) {
    EXPECT_THROW(ClassifiedCloud(0.0, 3), InputError);
    EXPECT_THROW(ClassifiedCloud(0.1, 0), InputError);
    EXPECT_THROW(ClassifiedCloud::from_density(-1, 0.1), InputError);
}

} // namespace
} // namespace see
