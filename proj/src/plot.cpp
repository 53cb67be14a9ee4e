#include "see/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace see {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

} // namespace

std::string svg_line_chart(const Series& series, const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (!series.x.empty()) {
        x_lo = *std::min_element(series.x.begin(), series.x.end());
        x_hi = *std::max_element(series.x.begin(), series.x.end());
        y_lo = 0.0;
        y_hi = 0.0;
        for (std::size_t i = 0; i < series.y.size(); ++i) {
            const double e = i < series.err.size() ? series.err[i] : 0.0;
            y_lo = std::min(y_lo, series.y[i] - e);
            y_hi = std::max(y_hi, series.y[i] + e);
        }
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1;
    if (y_hi <= y_lo) y_hi = y_lo + 1;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto sy = [&](double y) { return kTop + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(xv)
            << "</text>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
            << "</text>\n"
            << "<line x1=\"" << kLeft << "\" y1=\"" << sy(yv) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << sy(yv)
            << "\" stroke=\"#ddd\"/>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n"
        << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y_label
        << "</text>\n";
    for (std::size_t i = 0; i < series.x.size() && i < series.err.size(); ++i) {
        if (series.err[i] <= 0.0) continue;
        svg << "<line x1=\"" << sx(series.x[i]) << "\" y1=\"" << sy(series.y[i] - series.err[i]) << "\" x2=\""
            << sx(series.x[i]) << "\" y2=\"" << sy(series.y[i] + series.err[i]) << "\" stroke=\"#8ab\"/>\n";
    }
    if (!series.x.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series.x.size(); ++i) svg << sx(series.x[i]) << ',' << sy(series.y[i]) << ' ';
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_summary_plots(const std::filesystem::path& dir, std::span<const SummaryRow> rows) {
    Series cov, time, dist;
    for (const SummaryRow& r : rows) {
        const auto x = static_cast<double>(r.view);
        cov.x.push_back(x);
        cov.y.push_back(r.coverage_mean);
        cov.err.push_back(r.coverage_std);
        time.x.push_back(x);
        time.y.push_back(r.time_mean);
        time.err.push_back(r.time_std);
        dist.x.push_back(x);
        dist.y.push_back(r.distance_mean);
        dist.err.push_back(r.distance_std);
    }
    const auto write = [&](const char* name, const std::string& body) {
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write plot " + (dir / name).string());
        out << body;
    };
    write("coverage.svg", svg_line_chart(cov, "Surface coverage", "views", "coverage"));
    write("time.svg", svg_line_chart(time, "Cumulative planning time", "views", "time [s]"));
    write("distance.svg", svg_line_chart(dist, "Cumulative travel distance", "views", "distance [m]"));
}

} // namespace see
