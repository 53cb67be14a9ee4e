#include "see/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "see/mesh_io.hpp"
#include "see/rng.hpp"

namespace see {

void ExperimentConfig::validate() const {
    if (mesh.empty()) throw InputError("config: mesh is required");
    if (!(mesh_scale > 0.0)) throw InputError("config: mesh_scale must be positive");
    if (!(resolution > 0.0)) throw InputError("config: resolution must be positive");
    if (!k_min && !density) throw InputError("config: set density or k_min");
    if (k_min && *k_min < 1) throw InputError("config: k_min must be at least 1");
    if (density && !(*density > 0.0)) throw InputError("config: density must be positive");
    if (view_distance && !(*view_distance > 0.0)) throw InputError("config: view_distance must be positive");
    if (!(view_offset >= 0.0)) throw InputError("config: view_offset must be non-negative");
    if (!(registration_distance > 0.0)) throw InputError("config: registration_distance must be positive");
    if (trials < 1) throw InputError("config: trials must be at least 1");
    if (max_views < 1) throw InputError("config: max_views must be at least 1");
    if (initial_axis.norm() == 0.0) throw InputError("config: initial_axis must be non-zero");
    sensor.validate();
}

std::size_t ExperimentConfig::effective_k_min() const {
    if (k_min) return *k_min;
    return compute_k_min(*density, resolution);
}

TriangleMesh load_scene(const ExperimentConfig& config) {
    const std::string prefix = "builtin:";
    if (config.mesh.rfind(prefix, 0) == 0) {
        const std::string name = config.mesh.substr(prefix.size());
        const double s = config.mesh_scale;
        if (name == "plate") return shapes::plate(s, 40);
        if (name == "cube") return shapes::cube(s, 20);
        if (name == "sphere") return shapes::sphere(s, 4);
        if (name == "right_angle") return shapes::right_angle(s, 40);
        throw MeshLoadError("unknown builtin scene '" + name + "'");
    }
    return load_mesh(config.mesh, config.mesh_scale);
}

double coverage(std::span<const Vec3> model_points, const PointStore& measurements, double registration_distance) {
    if (model_points.empty()) throw ContractViolation("coverage: empty model");
    if (measurements.empty()) return 0.0;
    std::size_t observed = 0;
    for (const Vec3& m : model_points) {
        if (measurements.any_within(m, registration_distance)) ++observed;
    }
    return static_cast<double>(observed) / static_cast<double>(model_points.size());
}

CoverageTracker::CoverageTracker(std::vector<Vec3> model_points, double registration_distance)
    : registration_distance_(registration_distance), model_(registration_distance), covered_(model_points.size(), 0) {
    if (model_points.empty()) throw ContractViolation("coverage: empty model");
    model_.insert_batch(model_points);
}

void CoverageTracker::add(std::span<const Vec3> measurements) {
    std::vector<PointId> hits;
    for (const Vec3& p : measurements) {
        model_.radius_query(p, registration_distance_, hits);
        for (PointId id : hits) {
            if (covered_[id] == 0) {
                covered_[id] = 1;
                ++observed_;
            }
        }
    }
}

double CoverageTracker::ratio() const {
    return static_cast<double>(observed_) / static_cast<double>(covered_.size());
}

std::vector<Vec3> sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed) {
    const auto& verts = mesh.vertices();
    std::vector<double> cumulative;
    cumulative.reserve(mesh.triangles().size());
    double total = 0.0;
    for (const Triangle& t : mesh.triangles()) {
        total += 0.5 * (verts[t[1]] - verts[t[0]]).cross(verts[t[2]] - verts[t[0]]).norm();
        cumulative.push_back(total);
    }
    Rng rng(seed);
    std::vector<Vec3> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = rng.uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        const std::size_t tri = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                      cumulative.size() - 1);
        const Triangle& t = mesh.triangles()[tri];
        double u = rng.uniform();
        double v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        samples.push_back(verts[t[0]] + u * (verts[t[1]] - verts[t[0]]) + v * (verts[t[2]] - verts[t[0]]));
    }
    return samples;
}

std::vector<Vec3> model_points(const ExperimentConfig& config, const TriangleMesh& mesh) {
    if (config.model_samples > 0) return sample_surface(mesh, config.model_samples, derive_seed(config.seed, 0xC0FFEE));
    return mesh.vertices();
}

TrialSetup make_setup(const ExperimentConfig& config, const TriangleMesh& mesh) {
    config.validate();
    TrialSetup setup;
    setup.planner.resolution = config.resolution;
    setup.planner.k_min = config.effective_k_min();
    setup.planner.view_distance =
        config.view_distance ? *config.view_distance : view_distance_from_scene(mesh, config.view_offset);
    setup.planner.frame_radius = config.frame_radius.value_or(config.resolution);
    const double margin = config.scene_margin.value_or(std::max(config.resolution, 5.0 * config.sensor.noise_sigma));
    setup.bounds.box = mesh.bounds().expanded(margin);

    const Vec3 center = mesh.bounds().center();
    const Vec3 position = config.initial_position.value_or(
        center + setup.planner.view_distance * config.initial_axis.normalized());
    const Vec3 toward = center - position;
    if (toward.norm() == 0.0) throw InputError("config: initial position coincides with the scene centre");
    setup.initial = ViewPose{position, toward.normalized()};
    return setup;
}

RunLog run_trial(const ExperimentConfig& config, const TriangleMesh& mesh, std::size_t trial,
                 const ViewCallback& on_view) {
    using Clock = std::chrono::steady_clock;
    const TrialSetup setup = make_setup(config, mesh);

    RunLog log;
    log.trial = trial;
    log.seed = config.trial_seed(trial);

    Planner planner(setup.planner, setup.initial);
    CoverageTracker tracker(model_points(config, mesh), config.registration_distance);
    SensorSpec sensor = config.sensor;

    ViewPose pose = setup.initial;
    double travelled = 0.0;
    for (std::size_t view = 0; view < config.max_views; ++view) {
        sensor.seed = derive_seed(log.seed, view);
        const std::vector<Vec3> measurements = capture(pose, sensor, mesh, setup.bounds);

        const auto start = Clock::now();
        planner.observe(pose, measurements);
        PlanStep step = planner.plan_next();
        while (!step.complete() && step.pose.position != pose.position &&
               path_blocked(pose.position, step.pose.position, mesh)) {
            step = planner.reject_last();
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

        tracker.add(measurements);
        ViewRecord record;
        record.view = view;
        record.pose = pose;
        record.plan_time_s = config.record_timing ? elapsed : 0.0;
        record.cum_distance_m = travelled;
        record.coverage = tracker.ratio();
        record.n_core = planner.cloud().count(Label::core);
        record.n_frontier = planner.cloud().count(Label::frontier);
        record.n_outlier = planner.cloud().count(Label::outlier);
        log.views.push_back(record);
        if (on_view) on_view(record, planner.cloud().size());

        if (step.complete()) {
            log.completed = true;
            break;
        }
        travelled += (step.pose.position - pose.position).norm();
        pose = step.pose;
    }
    log.stats = planner.stats();
    log.total_points = planner.cloud().size();
    return log;
}

RunLog run_trial(const ExperimentConfig& config, std::size_t trial) {
    const TriangleMesh mesh = load_scene(config);
    return run_trial(config, mesh, trial);
}

std::vector<RunLog> run_experiment(const ExperimentConfig& config, const TriangleMesh& mesh, std::size_t jobs) {
    config.validate();
    std::vector<RunLog> logs(config.trials);
    jobs = std::clamp<std::size_t>(jobs, 1, config.trials);
    if (jobs == 1) {
        for (std::size_t t = 0; t < config.trials; ++t) logs[t] = run_trial(config, mesh, t);
        return logs;
    }
    std::mutex lock;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                std::size_t t;
                {
                    std::lock_guard guard(lock);
                    if (next >= config.trials || failure) return;
                    t = next++;
                }
                try {
                    logs[t] = run_trial(config, mesh, t);
                } catch (...) {
                    std::lock_guard guard(lock);
                    failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
    return logs;
}

std::vector<SummaryRow> summarize(std::span<const RunLog> logs) {
    std::size_t length = 0;
    for (const RunLog& log : logs) length = std::max(length, log.views.size());

    // Cumulative planning time per log.
    std::vector<std::vector<double>> cum_time(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        double sum = 0.0;
        for (const ViewRecord& r : logs[i].views) {
            sum += r.plan_time_s;
            cum_time[i].push_back(sum);
        }
    }

    const auto mean_std = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size());
        return std::pair{mean, std::sqrt(var)};
    };

    std::vector<SummaryRow> rows;
    std::vector<double> cov, time, dist;
    for (std::size_t k = 0; k < length; ++k) {
        cov.clear();
        time.clear();
        dist.clear();
        SummaryRow row;
        row.view = k;
        for (std::size_t i = 0; i < logs.size(); ++i) {
            const auto& views = logs[i].views;
            if (views.empty()) continue;
            const std::size_t at = std::min(k, views.size() - 1);
            if (k < views.size()) ++row.active;
            cov.push_back(views[at].coverage);
            time.push_back(cum_time[i][at]);
            dist.push_back(views[at].cum_distance_m);
        }
        std::tie(row.coverage_mean, row.coverage_std) = mean_std(cov);
        std::tie(row.time_mean, row.time_std) = mean_std(time);
        std::tie(row.distance_mean, row.distance_std) = mean_std(dist);
        rows.push_back(row);
    }
    return rows;
}

} // namespace see
