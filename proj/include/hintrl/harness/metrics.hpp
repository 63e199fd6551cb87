#pragma once

#include <string>
#include <vector>

namespace hintrl::harness {

struct MetricPoint {
    long frames = 0;        // cumulative environment steps, strictly increasing
    double win_rate = 0.0;  // trailing-100-episode success fraction
    double mean_return = 0.0;
    long episodes = 0;

    std::string to_jsonl() const;
};

void write_metrics(const std::string& path, const std::vector<MetricPoint>& points);
std::vector<MetricPoint> read_metrics(const std::string& path);

struct FramesToThreshold {
    bool reached = false;
    long frames = 0;

    std::string to_string() const;  // "120K" or "Never"
};

// First frames value whose win_rate >= threshold. threshold must lie in
// (0,1); empty metrics are a usage error.
FramesToThreshold frames_to_threshold(const std::vector<MetricPoint>& metrics, double threshold);

std::string format_frames(long frames);     // 120000 -> "120K", 1080000 -> "1.08M"
std::string format_speedup(double factor);  // 9.0 -> "(9x)", 1.23 -> "(1.2x)"

}  // namespace hintrl::harness
