#include <gtest/gtest.h>

#include "see/evaluation.hpp"
#include "see/mesh_io.hpp"
#include "test_support.hpp"

namespace see {
namespace {

PointStore store_of(const std::vector<Vec3>& pts) {
    PointStore s(0.05);
    s.insert_batch(pts);
    return s;
}

TEST(Coverage, Examples) {
    std::vector<Vec3> model;
    for (int i = 0; i < 10; ++i) model.emplace_back(0.01 * i, 0, 0);
    EXPECT_EQ(coverage(model, store_of({}), 0.015), 0.0);
    EXPECT_EQ(coverage(model, store_of(model), 1e-9), 1.0);
    EXPECT_DOUBLE_EQ(coverage(model, store_of({{0, 0, 0}}), 0.015), 0.2);
    EXPECT_THROW(coverage({}, store_of({}), 0.01), ContractViolation);
}

TEST(Coverage, TrackerMatchesBatchAndIsMonotone) {
    Rng rng(9);
    const auto model = test::random_cloud(rng, 2000, 0.5);
    CoverageTracker tracker(model, 0.03);
    std::vector<Vec3> all;
    double last = 0;
    for (int batch = 0; batch < 12; ++batch) {
        const auto pts = test::random_cloud(rng, 50, 0.5);
        tracker.add(pts);
        all.insert(all.end(), pts.begin(), pts.end());
        EXPECT_DOUBLE_EQ(tracker.ratio(), coverage(model, store_of(all), 0.03));
        EXPECT_GE(tracker.ratio(), last);
        last = tracker.ratio();
    }
    EXPECT_EQ(tracker.total(), 2000u);
}

TEST(Sampling, SurfaceSamplesLieOnTheMesh) {
    const TriangleMesh cube = shapes::cube(1.0, 2);
    const auto pts = sample_surface(cube, 500, 3);
    ASSERT_EQ(pts.size(), 500u);
    for (const Vec3& p : pts) EXPECT_LE(cube.distance_to_surface(p), 1e-12);
    EXPECT_EQ(pts, sample_surface(cube, 500, 3));
}

RunLog log_with(std::vector<double> cov, std::vector<double> time, std::vector<double> dist) {
    RunLog log;
    for (std::size_t i = 0; i < cov.size(); ++i) {
        ViewRecord r;
        r.view = i;
        r.coverage = cov[i];
        r.plan_time_s = time[i];
        r.cum_distance_m = dist[i];
        log.views.push_back(r);
    }
    return log;
}

TEST(Summarize, Examples) {
    EXPECT_TRUE(summarize({}).empty());
    const std::vector<RunLog> one{log_with({0.1, 0.3}, {1, 2}, {0, 5})};
    const auto s1 = summarize(one);
    ASSERT_EQ(s1.size(), 2u);
    EXPECT_EQ(s1[1].coverage_mean, 0.3);
    EXPECT_EQ(s1[1].coverage_std, 0.0);
    EXPECT_EQ(s1[1].time_mean, 3.0);  // cumulative planning time
    EXPECT_EQ(s1[1].distance_mean, 5.0);

    // Population std-dev: 0.4 and 0.6 give 0.1.
    const std::vector<RunLog> two{log_with({0.4}, {0}, {0}), log_with({0.6}, {0}, {0})};
    const auto s2 = summarize(two);
    EXPECT_NEAR(s2[0].coverage_mean, 0.5, 1e-15);
    EXPECT_NEAR(s2[0].coverage_std, 0.1, 1e-15);
}

TEST(Summarize, EarlyFinishersCarryForward) {
    const std::vector<RunLog> logs{log_with({0.5}, {1}, {2}), log_with({0.1, 0.9, 1.0}, {1, 1, 1}, {0, 1, 2})};
    const auto s = summarize(logs);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[2].active, 1u);
    EXPECT_EQ(s[0].active, 2u);
    EXPECT_NEAR(s[2].coverage_mean, 0.75, 1e-15);
    EXPECT_NEAR(s[2].time_mean, 2.0, 1e-15);
    EXPECT_NEAR(s[2].distance_mean, 2.0, 1e-15);
}

ExperimentConfig plate_config() {
    ExperimentConfig c;
    c.mesh = "builtin:plate";
    c.resolution = 0.02;
    c.k_min = 10;
    c.view_offset = 2.0;
    c.sensor.noise_sigma = 0.0;
    c.registration_distance = 0.02;
    c.max_views = 200;
    c.record_timing = false;
    return c;
}

TEST(Config, KMinResolution) {
    ExperimentConfig c;
    c.k_min.reset();
    c.density = 4000;
    c.resolution = 0.02;
    EXPECT_EQ(c.effective_k_min(), 2u);
    c.k_min = 17;
    EXPECT_EQ(c.effective_k_min(), 17u);
    c.k_min.reset();
    c.density.reset();
    EXPECT_THROW(c.validate(), InputError);
}

TEST(Config, ValidateRejectsBadValues) {
    ExperimentConfig c = plate_config();
    EXPECT_NO_THROW(c.validate());
    c.registration_distance = 0;
    EXPECT_THROW(c.validate(), InputError);
    c = plate_config();
    c.trials = 0;
    EXPECT_THROW(c.validate(), InputError);
    c = plate_config();
    c.mesh = "builtin:teapot";
    EXPECT_THROW(load_scene(c), MeshLoadError);
}

TEST(RunTrial, PlateCompletesWithFullCoverage) {
    const ExperimentConfig c = plate_config();
    const TriangleMesh mesh = load_scene(c);
    std::size_t callbacks = 0;
    const RunLog log = run_trial(c, mesh, 0, [&](const ViewRecord& r, std::size_t stored) {
        EXPECT_EQ(r.view, callbacks++);
        EXPECT_GT(stored, 0u);
    });
    EXPECT_TRUE(log.completed);
    ASSERT_FALSE(log.views.empty());
    EXPECT_EQ(callbacks, log.views.size());
    EXPECT_GE(log.views.back().coverage, 0.99);
    EXPECT_EQ(log.views.back().n_frontier, 0u);
    EXPECT_EQ(log.seed, c.trial_seed(0));

    double dist = 0;
    for (std::size_t i = 0; i < log.views.size(); ++i) {
        const ViewRecord& r = log.views[i];
        EXPECT_EQ(r.view, i);
        EXPECT_EQ(r.plan_time_s, 0.0);  // timing disabled
        if (i > 0) {
            dist += (r.pose.position - log.views[i - 1].pose.position).norm();
            EXPECT_GE(r.coverage, log.views[i - 1].coverage);
            EXPECT_GE(r.cum_distance_m, log.views[i - 1].cum_distance_m);
        }
        EXPECT_NEAR(r.cum_distance_m, dist, 1e-9);
    }
    const ViewRecord& last = log.views.back();
    EXPECT_EQ(last.n_core + last.n_frontier + last.n_outlier, log.total_points);
}

TEST(RunTrial, Deterministic) {
    ExperimentConfig c = plate_config();
    c.sensor.noise_sigma = 0.01;
    c.max_views = 8;
    const TriangleMesh mesh = load_scene(c);
    const RunLog a = run_trial(c, mesh, 1);
    const RunLog b = run_trial(c, mesh, 1);
    ASSERT_EQ(a.views.size(), b.views.size());
    for (std::size_t i = 0; i < a.views.size(); ++i) {
        EXPECT_EQ(a.views[i].pose.position, b.views[i].pose.position);
        EXPECT_EQ(a.views[i].pose.direction, b.views[i].pose.direction);
        EXPECT_EQ(a.views[i].coverage, b.views[i].coverage);
        EXPECT_EQ(a.views[i].n_frontier, b.views[i].n_frontier);
    }
    EXPECT_EQ(a.total_points, b.total_points);
}

TEST(RunTrial, SafetyCapMarksIncomplete) {
    ExperimentConfig c = plate_config();
    c.max_views = 1;
    const RunLog log = run_trial(c, load_scene(c), 0);
    EXPECT_EQ(log.views.size(), 1u);
    EXPECT_FALSE(log.completed);
}

TEST(RunExperiment, OrderedByTrialAndMatchesSingleRuns) {
    ExperimentConfig c = plate_config();
    c.max_views = 4;
    c.trials = 3;
    const TriangleMesh mesh = load_scene(c);
    const auto logs = run_experiment(c, mesh, 2);
    ASSERT_EQ(logs.size(), 3u);
    for (std::size_t t = 0; t < 3; ++t) {
        EXPECT_EQ(logs[t].trial, t);
        const RunLog single = run_trial(c, mesh, t);
        ASSERT_EQ(single.views.size(), logs[t].views.size());
        EXPECT_EQ(single.views.back().coverage, logs[t].views.back().coverage);
    }
}

} // namespace
} // namespace see
