#include "hintrl/cli/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "hintrl/harness/metrics.hpp"
#include "hintrl/util/error.hpp"

namespace hintrl::cli {

using util::ConfigError;

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kWidth = 880, kHeight = 520;
constexpr double kLeft = 70, kRight = 700, kTop = 30, kBottom = 470;

struct Series {
    std::string name;
    std::vector<std::pair<long, double>> points;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

}  // namespace

PlotResult render_learning_curves(const std::vector<std::string>& metrics_files,
                                  const std::vector<std::string>& names, long budget) {
    if (metrics_files.empty()) throw ConfigError("plot: at least one metrics file required");

    PlotResult result;
    std::vector<Series> series;
    long max_frames = 0;
    for (size_t i = 0; i < metrics_files.size(); ++i) {
        std::ifstream in(metrics_files[i]);
        if (!in) throw ConfigError("cannot open metrics file: " + metrics_files[i]);
        Series s;
        s.name = i < names.size() ? names[i] : metrics_files[i];
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("frames") || !j.contains("win_rate") ||
                !j["frames"].is_number() || !j["win_rate"].is_number()) {
                std::cerr << "plot: skipping malformed line in " << metrics_files[i] << "\n";
                result.skipped_lines += 1;
                continue;
            }
            s.points.emplace_back(j["frames"].get<long>(), j["win_rate"].get<double>());
        }
        if (s.points.empty()) {
            throw ConfigError("metrics file has no valid points: " + metrics_files[i]);
        }
        max_frames = std::max(max_frames, s.points.back().first);
        series.push_back(std::move(s));
    }
    const long x_max = budget > 0 ? budget : std::max<long>(max_frames, 1);

    auto sx = [&](long frames) {
        return kLeft + (kRight - kLeft) * static_cast<double>(frames) / static_cast<double>(x_max);
    };
    auto sy = [&](double win) { return kBottom - (kBottom - kTop) * win; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and grid.
    for (int i = 0; i <= 4; ++i) {
        const double y = sy(0.25 * i);
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kRight << "\" y2=\""
            << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" << fmt(0.25 * i)
            << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const long frames = x_max * i / 5;
        const double x = sx(frames);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(x) << "\" y2=\""
            << kBottom + 5 << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 20
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
            << harness::format_frames(frames) << "</text>\n";
    }
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
        << "\" stroke=\"#333333\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">frames</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" transform=\"rotate(-90 "
        << "18 " << (kTop + kBottom) / 2 << ")\">win rate</text>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [frames, win] : series[i].points) {
            svg << fmt(sx(frames)) << ',' << fmt(sy(std::clamp(win, 0.0, 1.0))) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kTop + 20 + 20 * static_cast<double>(i);
        svg << "<line x1=\"" << kRight + 10 << "\" y1=\"" << fmt(ly) << "\" x2=\"" << kRight + 34
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kRight + 40 << "\" y=\"" << fmt(ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << series[i].name << "</text>\n";
    }
    svg << "</svg>\n";

    result.svg = svg.str();
    result.series = static_cast<int>(series.size());
    return result;
}

}  // namespace hintrl::cli
