#include "hintrl/harness/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hintrl/harness/train.hpp"
#include "hintrl/util/error.hpp"

namespace hintrl::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * v);
    return buf;
}

}  // namespace

GridResult run_grid(const ExperimentConfig& base, const std::vector<GridCondition>& conditions) {
    if (conditions.empty()) throw util::UsageError("run_grid: at least one condition required");
    base.validate();
    fs::create_directories(base.out_dir);

    GridResult result;
    std::vector<double> half_medians(conditions.size(), kNever);

    for (size_t ci = 0; ci < conditions.size(); ++ci) {
        const GridCondition& cond = conditions[ci];
        GridRow row;
        row.name = cond.name;
        try {
            ExperimentConfig cfg =
                ExperimentConfig::from_json_with_overrides(base.to_json(), cond.overrides);
            cfg.out_dir = (fs::path(base.out_dir) / cond.name).string();
            cfg.run_name = cond.name;
            const std::vector<RunArtifacts> runs = train(cfg);

            std::vector<double> wins, half_frames;
            for (const RunArtifacts& run : runs) {
                wins.push_back(run.eval_win_rate >= 0.0 ? run.eval_win_rate : run.final_win_rate);
                const FramesToThreshold ftt = frames_to_threshold(run.metrics, 0.5);
                half_frames.push_back(ftt.reached ? static_cast<double>(ftt.frames) : kNever);
            }
            row.win_mean = std::accumulate(wins.begin(), wins.end(), 0.0) / wins.size();
            row.win_min = *std::min_element(wins.begin(), wins.end());
            row.win_max = *std::max_element(wins.begin(), wins.end());
            const double med = median(half_frames);
            half_medians[ci] = med;
            row.frames_to_half =
                med == kNever ? FramesToThreshold{false, 0} : FramesToThreshold{true, static_cast<long>(med)};
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));
    }

    // Speedups against the "baseline" row (or the first row).
    size_t base_idx = 0;
    for (size_t i = 0; i < result.rows.size(); ++i) {
        if (result.rows[i].name == "baseline") {
            base_idx = i;
            break;
        }
    }
    const double base_frames = half_medians[base_idx];
    for (size_t i = 0; i < result.rows.size(); ++i) {
        GridRow& row = result.rows[i];
        if (row.ok && base_frames != kNever && half_medians[i] != kNever && half_medians[i] > 0) {
            row.speedup = format_speedup(base_frames / half_medians[i]);
        }
    }

    std::ostringstream csv;
    csv << "condition,win_mean,win_min,win_max,frames_to_50pct_median,speedup,error\n";
    for (const GridRow& row : result.rows) {
        if (row.ok) {
            csv << row.name << ',' << row.win_mean << ',' << row.win_min << ',' << row.win_max << ','
                << (row.frames_to_half.reached ? std::to_string(row.frames_to_half.frames) : "Never")
                << ',' << row.speedup << ",\n";
        } else {
            csv << row.name << ",,,,,,\"" << row.error << "\"\n";
        }
    }
    result.csv = csv.str();

    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof(line), "%-20s %-24s %-14s %s\n", "condition", "final win rate",
                  "frames->50%", "speedup");
    table << line;
    table << std::string(70, '-') << '\n';
    for (const GridRow& row : result.rows) {
        if (row.ok) {
            const std::string win =
                pct(row.win_mean) + " [" + pct(row.win_min) + ", " + pct(row.win_max) + "]";
            std::snprintf(line, sizeof(line), "%-20s %-24s %-14s %s\n", row.name.c_str(), win.c_str(),
                          row.frames_to_half.to_string().c_str(), row.speedup.c_str());
        } else {
            std::snprintf(line, sizeof(line), "%-20s FAILED: %s\n", row.name.c_str(), row.error.c_str());
        }
        table << line;
    }
    result.table = table.str();

    std::ofstream(fs::path(base.out_dir) / "results.csv") << result.csv;
    std::ofstream(fs::path(base.out_dir) / "results.txt") << result.table;
    return result;
}

GridResult run_grid_spec(const nlohmann::json& spec) {
    if (!spec.contains("base") || !spec.contains("conditions")) {
        throw util::ConfigError("grid spec needs 'base' and 'conditions'");
    }
    const ExperimentConfig base = ExperimentConfig::from_json(spec.at("base"));
    std::vector<GridCondition> conditions;
    for (const auto& jc : spec.at("conditions")) {
        GridCondition cond;
        cond.name = jc.at("name").get<std::string>();
        if (cond.name.empty()) throw util::ConfigError("grid condition needs a non-empty name");
        if (jc.contains("set")) {
            for (const auto& [key, value] : jc.at("set").items()) {
                const std::string text =
                    value.is_string() ? value.get<std::string>() : value.dump();
                cond.overrides.push_back(key + "=" + text);
            }
        }
        conditions.push_back(std::move(cond));
    }
    return run_grid(base, conditions);
}

}  // namespace hintrl::harness
