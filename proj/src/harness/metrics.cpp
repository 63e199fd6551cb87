#include "hintrl/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "hintrl/util/error.hpp"

namespace hintrl::harness {

using util::ConfigError;
using util::UsageError;

std::string MetricPoint::to_jsonl() const {
    nlohmann::json j = {{"frames", frames},
                        {"win_rate", win_rate},
                        {"mean_return", mean_return},
                        {"episodes", episodes}};
    return j.dump();
}

void write_metrics(const std::string& path, const std::vector<MetricPoint>& points) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write metrics file: " + path);
    for (const MetricPoint& p : points) out << p.to_jsonl() << '\n';
}

std::vector<MetricPoint> read_metrics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metrics file: " + path);
    std::vector<MetricPoint> points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        points.push_back({j.at("frames").get<long>(), j.at("win_rate").get<double>(),
                          j.at("mean_return").get<double>(), j.at("episodes").get<long>()});
    }
    return points;
}

std::string FramesToThreshold::to_string() const { return reached ? format_frames(frames) : "Never"; }

FramesToThreshold frames_to_threshold(const std::vector<MetricPoint>& metrics, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0) throw UsageError("threshold must lie in (0,1)");
    if (metrics.empty()) throw UsageError("frames_to_threshold: empty metrics");
    for (const MetricPoint& p : metrics) {
        if (p.win_rate >= threshold) return {true, p.frames};
    }
    return {false, 0};
}

std::string format_frames(long frames) {
    char buf[32];
    if (frames < 1000) {
        std::snprintf(buf, sizeof(buf), "%ld", frames);
    } else if (frames < 1000000) {
        const double k = static_cast<double>(frames) / 1000.0;
        if (std::abs(k - std::round(k)) < 1e-9) {
            std::snprintf(buf, sizeof(buf), "%.0fK", k);
        } else {
            std::snprintf(buf, sizeof(buf), "%.1fK", k);
        }
    } else {
        const double m = static_cast<double>(frames) / 1000000.0;
        if (std::abs(m - std::round(m)) < 1e-9) {
            std::snprintf(buf, sizeof(buf), "%.0fM", m);
        } else {
            std::snprintf(buf, sizeof(buf), "%.2fM", m);
        }
    }
    return buf;
}

std::string format_speedup(double factor) {
    char buf[32];
    const double rounded = std::round(factor * 10.0) / 10.0;
    if (std::abs(rounded - std::round(rounded)) < 1e-9) {
        std::snprintf(buf, sizeof(buf), "(%.0f×)", rounded);
    } else {
        std::snprintf(buf, sizeof(buf), "(%.1f×)", rounded);
    }
    return buf;
}

}  // namespace hintrl::harness
