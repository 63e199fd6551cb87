#pragma once

#include <string>
#include <vector>

namespace hintrl::cli {

struct PlotResult {
    std::string svg;
    int series = 0;
    int skipped_lines = 0;  // malformed metric lines dropped with a warning
};

// Self-contained SVG learning-curve plot: x spans [0, budget] frames, y
// spans [0, 1] win rate, one polyline per metrics file plus a legend.
// budget 0 derives the x range from the data. Throws ConfigError when a file
// yields no valid points.
PlotResult render_learning_curves(const std::vector<std::string>& metrics_files,
                                  const std::vector<std::string>& names, long budget = 0);

}  // namespace hintrl::cli
