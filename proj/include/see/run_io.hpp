#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "see/evaluation.hpp"

namespace see {

inline constexpr const char* kVersion = "0.3.1";

inline constexpr const char* kRunLogHeader =
    "trial,view,px,py,pz,ox,oy,oz,plan_time_s,cum_dist_m,coverage,n_core,n_frontier,n_outlier";

/// One row per view, with header. Values use shortest round-trip formatting.
void write_runlog_csv(std::ostream& out, std::span<const RunLog> logs);
void write_runlog_csv(const std::filesystem::path& path, std::span<const RunLog> logs);

/// Rows back from write_runlog_csv (trial grouping restored; stats and completion not stored).
std::vector<RunLog> read_runlog_csv(std::istream& in);

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);

/// Config echo, per-trial seeds and outcomes, code version, kernel variant.
std::string manifest_json(const ExperimentConfig& config, std::span<const RunLog> logs);

/// Writes the full artifact set into `dir`: trial_<n>.csv, runs.csv,
/// summary.csv, manifest.json and the three plot SVGs.
void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config, std::span<const RunLog> logs);

/// Whitespace-separated "x y z" per line; blank lines and '#' comments skipped.
/// Throws std::runtime_error naming the offending line.
std::vector<Vec3> read_xyz(std::istream& in);

/// "x y z label" per line.
void write_labelled_xyz(std::ostream& out, std::span<const Vec3> points, std::span<const Label> labels);

} // namespace see
