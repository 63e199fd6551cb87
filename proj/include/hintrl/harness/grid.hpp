#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hintrl/harness/config.hpp"
#include "hintrl/harness/metrics.hpp"

namespace hintrl::harness {

struct GridCondition {
    std::string name;
    std::vector<std::string> overrides;  // dot-path=value, applied to the base config
};

struct GridRow {
    std::string name;
    bool ok = false;
    std::string error;
    double win_mean = 0.0, win_min = 0.0, win_max = 0.0;
    FramesToThreshold frames_to_half;  // median over seeds
    std::string speedup;               // "(2.3x)" vs the baseline row, empty when n/a
};

struct GridResult {
    std::vector<GridRow> rows;
    std::string csv;
    std::string table;
};

// Trains every condition over the base config's seeds and aggregates final
// win rate (mean with min/max over seeds) and median frames-to-50%. The
// speedup column compares against the condition named "baseline" (else the
// first row). Per-condition failures are reported in the row; the grid
// continues. Writes results.csv and results.txt under base.out_dir.
GridResult run_grid(const ExperimentConfig& base, const std::vector<GridCondition>& conditions);

// Grid spec document: {"base": <config object>, "conditions":
//   [{"name": "...", "set": {"hints.provider": "oracle", ...}}, ...]}
GridResult run_grid_spec(const nlohmann::json& spec);

}  // namespace hintrl::harness
