#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hintrl/hints/provider.hpp"
#include "hintrl/hints/types.hpp"

namespace hintrl::hints {

// Hints are due on steps where t mod k == 0 (t is 1-based, so the first hint
// of an episode lands on step k). k < 1 is a configuration error.
bool schedule_due(int t, int k);

// One hint-log line per due step.
struct HintLogRecord {
    int64_t episode = 0;
    int t = 0;
    std::string encoding_kind;
    int hint_action = kNeutralAction;
    std::string subgoal;
    std::string provider;
    double latency_ms = 0.0;
    std::string reasoning;
    std::string error;  // empty on success

    std::string to_jsonl() const;
};

class HintLogWriter {
public:
    explicit HintLogWriter(const std::string& path);
    ~HintLogWriter();
    void append(const HintLogRecord& rec);
    void flush();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<HintLogRecord> read_hint_log(const std::string& path);

// Assembles the enhanced observation for step t. The provider is queried on
// due steps only; hint_available becomes 1 exactly when it produced a real
// (non-neutral) hint. Provider failures fall back to the neutral hint with
// hint_available = 0 and never propagate. One log record per due step.
// `out_result` (optional) surfaces the raw provider outcome to the caller.
EnhancedObservation augment(const env::Observation& obs, const HintContext& ctx, int k,
                            HintProvider* provider, HintLogWriter* log = nullptr,
                            HintResult* out_result = nullptr);

}  // namespace hintrl::hints
