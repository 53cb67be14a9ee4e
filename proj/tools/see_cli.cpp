// Command-line front end: `see run` for experiments, `see classify` for
// labelling a point cloud file.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "see/classification.hpp"
#include "see/config.hpp"
#include "see/mesh_io.hpp"
#include "see/run_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RunOptions {
    std::string config;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::string> out;
    std::optional<std::size_t> max_views;
    std::optional<double> rho;
    std::optional<double> resolution;
    std::optional<std::size_t> kmin;
    std::optional<double> view_offset;
    std::optional<double> rd;
};

struct ClassifyOptions {
    std::string cloud;
    std::optional<double> rho;
    std::optional<double> resolution;
    std::optional<std::size_t> kmin;
    std::optional<std::string> out;
};

int cmd_run(const RunOptions& opt) {
    see::RunConfig cfg;
    try {
        cfg = see::load_config(opt.config);
    } catch (const see::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    see::ExperimentConfig& e = cfg.experiment;
    if (opt.trials) e.trials = *opt.trials;
    if (opt.seed) e.seed = *opt.seed;
    if (opt.max_views) e.max_views = *opt.max_views;
    if (opt.rho) e.density = *opt.rho;
    if (opt.resolution) e.resolution = *opt.resolution;
    if (opt.kmin) e.k_min = *opt.kmin;
    if (opt.view_offset) e.view_offset = *opt.view_offset;
    if (opt.rd) e.registration_distance = *opt.rd;
    const std::size_t jobs = opt.jobs.value_or(cfg.jobs);

    std::string out_dir = "see_output";
    if (const char* env = std::getenv("SEE_OUTPUT_DIR")) out_dir = env;
    if (cfg.output_dir) out_dir = *cfg.output_dir;
    if (opt.out) out_dir = *opt.out;

    try {
        e.validate();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << opt.config << ": " << ex.what() << '\n';
        return kExitUsage;
    }

    std::optional<see::TriangleMesh> mesh;
    try {
        mesh.emplace(see::load_scene(e));
    } catch (const std::exception& ex) {
        std::cerr << "error: mesh: " << ex.what() << '\n';
        return kExitUsage;
    }

    try {
        const std::vector<see::RunLog> logs = see::run_experiment(e, *mesh, jobs);
        see::write_artifacts(out_dir, e, logs);
        for (const see::RunLog& log : logs) {
            std::cout << "trial " << log.trial << " seed " << log.seed << ": " << log.views.size() << " views, "
                      << (log.completed ? "complete" : "incomplete") << ", coverage "
                      << (log.views.empty() ? 0.0 : log.views.back().coverage) << '\n';
        }
        std::cout << "artifacts written to " << out_dir << '\n';
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_classify(const ClassifyOptions& opt) {
    if (!opt.kmin && !(opt.rho && opt.resolution)) {
        std::cerr << "error: classify needs --rho and --resolution, or --kmin and --resolution\n";
        return kExitUsage;
    }
    if (!opt.resolution) {
        std::cerr << "error: classify needs --resolution\n";
        return kExitUsage;
    }
    std::size_t k_min = 0;
    try {
        k_min = opt.kmin ? *opt.kmin : see::compute_k_min(*opt.rho, *opt.resolution);
        if (!(*opt.resolution > 0.0)) throw see::InputError("resolution must be positive");
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    }

    std::ifstream in(opt.cloud);
    if (!in) {
        std::cerr << "error: cannot open " << opt.cloud << '\n';
        return kExitRuntime;
    }
    std::vector<see::Vec3> points;
    try {
        points = see::read_xyz(in);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << opt.cloud << ": " << ex.what() << '\n';
        return kExitRuntime;
    }

    const std::vector<see::Label> labels = see::classify(points, *opt.resolution, k_min);
    const std::string out_path = opt.out.value_or(opt.cloud + ".labels");
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return kExitRuntime;
    }
    see::write_labelled_xyz(out, points, labels);

    std::size_t counts[3] = {0, 0, 0};
    for (see::Label l : labels) ++counts[static_cast<int>(l)];
    std::cout << "k_min " << k_min << '\n'
              << "core " << counts[0] << '\n'
              << "frontier " << counts[1] << '\n'
              << "outlier " << counts[2] << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface-edge next-best-view planner: experiments and point classification"};
    app.require_subcommand(1);

    RunOptions run;
    CLI::App* run_cmd = app.add_subcommand("run", "Run planning trials and write logs, summary and plots");
    run_cmd->add_option("--config", run.config, "Experiment config file")->required();
    run_cmd->add_option("--trials", run.trials, "Number of trials");
    run_cmd->add_option("--seed", run.seed, "Base seed; trial i uses seed + i");
    run_cmd->add_option("--jobs", run.jobs, "Trials to run concurrently");
    run_cmd->add_option("--out", run.out, "Output directory (default: $SEE_OUTPUT_DIR or ./see_output)");
    run_cmd->add_option("--max-views", run.max_views, "Safety cap on views per trial");
    run_cmd->add_option("--rho", run.rho, "Target density [points/m^3]");
    run_cmd->add_option("--resolution", run.resolution, "Resolution r [m]");
    run_cmd->add_option("--kmin", run.kmin, "Neighbour threshold, overrides --rho");
    run_cmd->add_option("--view-offset", run.view_offset, "Offset added to half the bbox diagonal [m]");
    run_cmd->add_option("--rd", run.rd, "Registration distance for coverage [m]");

    ClassifyOptions cls;
    CLI::App* cls_cmd = app.add_subcommand("classify", "Label an XYZ point cloud as core/frontier/outlier");
    cls_cmd->add_option("cloud", cls.cloud, "XYZ text file, one point per line")->required();
    cls_cmd->add_option("--rho", cls.rho, "Target density [points/m^3]");
    cls_cmd->add_option("--resolution", cls.resolution, "Resolution r [m]");
    cls_cmd->add_option("--kmin", cls.kmin, "Neighbour threshold, overrides --rho");
    cls_cmd->add_option("--out", cls.out, "Output file (default: <cloud>.labels)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*run_cmd) return cmd_run(run);
    return cmd_classify(cls);
}
