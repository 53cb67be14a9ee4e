#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "see/mesh.hpp"
#include "see/planner.hpp"
#include "see/sensor_sim.hpp"
#include "see/spatial_index.hpp"

namespace see {

struct ExperimentConfig {
    std::string mesh = "builtin:sphere";  ///< file path, or builtin:{plate,cube,sphere,right_angle}
    double mesh_scale = 1.0;
    std::optional<double> density;        ///< rho [points/m^3]; used when k_min is unset
    double resolution = 0.02;             ///< r [m]
    std::optional<std::size_t> k_min;     ///< overrides the density formula
    std::optional<double> view_distance;  ///< d_v [m]; default from the scene bounding box
    double view_offset = 2.0;             ///< [m] added to half the bbox diagonal
    std::optional<double> frame_radius;   ///< [m], default r
    SensorSpec sensor;
    double registration_distance = 0.005; ///< r_d [m]
    std::optional<Vec3> initial_position; ///< default: bbox centre + d_v * initial_axis
    Vec3 initial_axis = Vec3(1.0, 0.3, 0.6);
    std::optional<double> scene_margin;   ///< scene boundary padding [m]; default max(r, 5 sigma)
    std::size_t model_samples = 0;        ///< 0: model points are mesh vertices
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::size_t max_views = 500;
    bool record_timing = true;

    void validate() const;
    std::size_t effective_k_min() const;
    std::uint64_t trial_seed(std::size_t trial) const { return seed + trial; }
};

/// Builtin scene or mesh file, scaled.
TriangleMesh load_scene(const ExperimentConfig& config);

struct ViewRecord {
    std::size_t view = 0;
    ViewPose pose;
    double plan_time_s = 0.0;
    double cum_distance_m = 0.0;
    double coverage = 0.0;
    std::size_t n_core = 0;
    std::size_t n_frontier = 0;
    std::size_t n_outlier = 0;
};

struct RunLog {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool completed = false;
    std::vector<ViewRecord> views;
    PlannerStats stats;
    std::size_t total_points = 0;
};

/// Fraction of model points with a measurement within `registration_distance`.
/// Throws ContractViolation for an empty model.
double coverage(std::span<const Vec3> model_points, const PointStore& measurements, double registration_distance);

/// Incremental form of coverage(): feed each observation once.
class CoverageTracker {
public:
    CoverageTracker(std::vector<Vec3> model_points, double registration_distance);

    void add(std::span<const Vec3> measurements);
    double ratio() const;
    std::size_t observed() const { return observed_; }
    std::size_t total() const { return covered_.size(); }

private:
    double registration_distance_;
    PointStore model_;
    std::vector<std::uint8_t> covered_;
    std::size_t observed_ = 0;
};

/// Area-weighted uniform samples on the mesh surface.
std::vector<Vec3> sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed);

/// Model points used for coverage: mesh vertices or surface samples per config.
std::vector<Vec3> model_points(const ExperimentConfig& config, const TriangleMesh& mesh);

/// Resolved planner and scene parameters for one configuration.
struct TrialSetup {
    PlannerConfig planner;
    SceneBounds bounds;
    ViewPose initial;
};

TrialSetup make_setup(const ExperimentConfig& config, const TriangleMesh& mesh);

/// Called after each view is recorded; `stored` is the planner's point count.
using ViewCallback = std::function<void(const ViewRecord& record, std::size_t stored)>;

/// One full run: capture, ingest, plan, move (collision-checked) until the
/// planner reports completion or max_views views have been taken.
RunLog run_trial(const ExperimentConfig& config, const TriangleMesh& mesh, std::size_t trial,
                 const ViewCallback& on_view = {});
RunLog run_trial(const ExperimentConfig& config, std::size_t trial);

/// All trials; up to `jobs` run concurrently. Output is ordered by trial.
std::vector<RunLog> run_experiment(const ExperimentConfig& config, const TriangleMesh& mesh, std::size_t jobs = 1);

struct SummaryRow {
    std::size_t view = 0;
    double coverage_mean = 0.0, coverage_std = 0.0;
    double time_mean = 0.0, time_std = 0.0;          ///< cumulative planning time [s]
    double distance_mean = 0.0, distance_std = 0.0;  ///< cumulative distance [m]
    std::size_t active = 0;                          ///< trials still running at this view
};

/// Per-view mean and population std-dev across trials. Trials that finished
/// early contribute their final values to later views.
std::vector<SummaryRow> summarize(std::span<const RunLog> logs);

} // namespace see
