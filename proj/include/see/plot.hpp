#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "see/evaluation.hpp"

namespace see {

struct Series {
    std::vector<double> x, y, err;
};

/// Static SVG line chart with one-sigma error bars.
std::string svg_line_chart(const Series& series, const std::string& title, const std::string& x_label,
                           const std::string& y_label);

/// coverage.svg, time.svg and distance.svg against view count.
void write_summary_plots(const std::filesystem::path& dir, std::span<const SummaryRow> rows);

} // namespace see
