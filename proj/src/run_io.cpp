#include "see/run_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "see/plot.hpp"
#include "see/simd/kernels.hpp"

namespace see {
namespace {

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace

void write_runlog_csv(std::ostream& out, std::span<const RunLog> logs) {
    out << kRunLogHeader << '\n';
    for (const RunLog& log : logs) {
        for (const ViewRecord& r : log.views) {
            out << log.trial << ',' << r.view << ',' << num(r.pose.position.x()) << ',' << num(r.pose.position.y())
                << ',' << num(r.pose.position.z()) << ',' << num(r.pose.direction.x()) << ','
                << num(r.pose.direction.y()) << ',' << num(r.pose.direction.z()) << ',' << num(r.plan_time_s) << ','
                << num(r.cum_distance_m) << ',' << num(r.coverage) << ',' << r.n_core << ',' << r.n_frontier << ','
                << r.n_outlier << '\n';
        }
    }
}

void write_runlog_csv(const std::filesystem::path& path, std::span<const RunLog> logs) {
    std::ofstream out = open_out(path);
    write_runlog_csv(out, logs);
}

std::vector<RunLog> read_runlog_csv(std::istream& in) {
    std::vector<RunLog> logs;
    std::string line;
    if (!std::getline(in, line) || line != kRunLogHeader) throw std::runtime_error("run log: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 14) throw std::runtime_error("run log: expected 14 columns");
        const std::size_t trial = std::stoul(cells[0]);
        if (logs.empty() || logs.back().trial != trial) {
            logs.emplace_back();
            logs.back().trial = trial;
        }
        ViewRecord r;
        r.view = std::stoul(cells[1]);
        r.pose.position = Vec3(std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]));
        r.pose.direction = Vec3(std::stod(cells[5]), std::stod(cells[6]), std::stod(cells[7]));
        r.plan_time_s = std::stod(cells[8]);
        r.cum_distance_m = std::stod(cells[9]);
        r.coverage = std::stod(cells[10]);
        r.n_core = std::stoul(cells[11]);
        r.n_frontier = std::stoul(cells[12]);
        r.n_outlier = std::stoul(cells[13]);
        logs.back().views.push_back(r);
    }
    return logs;
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
    std::ofstream out = open_out(path);
    out << "view,coverage_mean,coverage_std,time_mean_s,time_std_s,distance_mean_m,distance_std_m,trials_active\n";
    for (const SummaryRow& r : rows) {
        out << r.view << ',' << num(r.coverage_mean) << ',' << num(r.coverage_std) << ',' << num(r.time_mean) << ','
            << num(r.time_std) << ',' << num(r.distance_mean) << ',' << num(r.distance_std) << ',' << r.active << '\n';
    }
}

std::string manifest_json(const ExperimentConfig& config, std::span<const RunLog> logs) {
    using nlohmann::json;
    const auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
    json cfg = {
        {"mesh", config.mesh},
        {"mesh_scale", config.mesh_scale},
        {"resolution", config.resolution},
        {"k_min", config.effective_k_min()},
        {"view_offset", config.view_offset},
        {"fov", config.sensor.fov},
        {"width", config.sensor.width},
        {"height", config.sensor.height},
        {"noise_sigma", config.sensor.noise_sigma},
        {"registration_distance", config.registration_distance},
        {"initial_axis", vec(config.initial_axis)},
        {"model_samples", config.model_samples},
        {"trials", config.trials},
        {"seed", config.seed},
        {"max_views", config.max_views},
        {"record_timing", config.record_timing},
    };
    if (config.density) cfg["density"] = *config.density;
    if (config.view_distance) cfg["view_distance"] = *config.view_distance;
    if (config.frame_radius) cfg["frame_radius"] = *config.frame_radius;
    if (config.initial_position) cfg["initial_position"] = vec(*config.initial_position);
    if (config.scene_margin) cfg["scene_margin"] = *config.scene_margin;

    json trials = json::array();
    for (const RunLog& log : logs) {
        trials.push_back({
            {"trial", log.trial},
            {"seed", log.seed},
            {"completed", log.completed},
            {"views", log.views.size()},
            {"final_coverage", log.views.empty() ? 0.0 : log.views.back().coverage},
            {"total_points", log.total_points},
            {"retirements", log.stats.retirements},
            {"observation_axis_switches", log.stats.observation_axis_switches},
            {"fallback_retirements", log.stats.fallback_retirements},
            {"rejected_views", log.stats.rejected_views},
        });
    }
    const json manifest = {
        {"version", kVersion},
        {"simd", std::string(simd::isa_name(simd::active().isa))},
        {"config", cfg},
        {"trials", trials},
    };
    return manifest.dump(2) + "\n";
}

void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config, std::span<const RunLog> logs) {
    std::filesystem::create_directories(dir);
    for (const RunLog& log : logs) {
        write_runlog_csv(dir / ("trial_" + std::to_string(log.trial) + ".csv"), std::span<const RunLog>(&log, 1));
    }
    write_runlog_csv(dir / "runs.csv", logs);
    const std::vector<SummaryRow> rows = summarize(logs);
    write_summary_csv(dir / "summary.csv", rows);
    {
        std::ofstream out = open_out(dir / "manifest.json");
        out << manifest_json(config, logs);
    }
    write_summary_plots(dir, rows);
}

std::vector<Vec3> read_xyz(std::istream& in) {
    std::vector<Vec3> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x)) {
            if (ls.eof()) continue;  // blank
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'x y z'");
        }
        std::string extra;
        if (!(ls >> y >> z) || (ls >> extra)) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'x y z'");
        }
        points.emplace_back(x, y, z);
    }
    return points;
}

void write_labelled_xyz(std::ostream& out, std::span<const Vec3> points, std::span<const Label> labels) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << num(points[i].x()) << ' ' << num(points[i].y()) << ' ' << num(points[i].z()) << ' '
            << label_name(labels[i]) << '\n';
    }
}

} // namespace see
