#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hintrl/encode/encoders.hpp"
#include "hintrl/hints/types.hpp"
#include "hintrl/util/rng.hpp"

namespace hintrl::hints {

struct HintContext {
    const env::WorldState& state;
    const env::Mission& mission;
    const ActionHistory& history;
    encode::EncodingKind encoding = encode::EncodingKind::AsciiGrid;
    int64_t episode = 0;  // stable episode id (for logs and replay)
    int t = 0;            // 1-based in-episode step index
};

struct HintResult {
    Hint hint = Hint::neutral();
    bool ok = true;
    std::string error;
    double latency_ms = 0.0;
};

// Hint sources must be safe for concurrent get_hint calls; failures degrade
// to a neutral result (ok = false), never throw out of get_hint.
class HintProvider {
public:
    virtual ~HintProvider() = default;
    virtual std::string name() const = 0;
    virtual HintResult get_hint(const HintContext& ctx) = 0;
};

class NeutralProvider final : public HintProvider {
public:
    std::string name() const override { return "neutral"; }
    HintResult get_hint(const HintContext&) override { return {}; }
};

// Ground-truth hints from the shortest-path planner.
class OracleProvider final : public HintProvider {
public:
    std::string name() const override { return "oracle"; }
    HintResult get_hint(const HintContext& ctx) override;
};

// Diagnostic adversary: always a fixed non-oracle action.
class AntiOracleProvider final : public HintProvider {
public:
    std::string name() const override { return "antioracle"; }
    HintResult get_hint(const HintContext& ctx) override;
};

// Oracle, except with probability epsilon the action is replaced by a
// uniformly random different action.
class NoisyProvider final : public HintProvider {
public:
    NoisyProvider(double epsilon, uint64_t seed) : epsilon_(epsilon), rng_(seed) {}
    std::string name() const override { return "noisy"; }
    HintResult get_hint(const HintContext& ctx) override;

private:
    double epsilon_;
    util::Rng rng_;
    std::mutex mutex_;
};

// Replays hints from a recorded hint log, keyed by (episode, t); steps with
// no recorded hint get the neutral value.
class ReplayProvider final : public HintProvider {
public:
    explicit ReplayProvider(const std::string& log_path);
    std::string name() const override { return "replay"; }
    HintResult get_hint(const HintContext& ctx) override;

private:
    std::map<std::pair<int64_t, int>, Hint> hints_;
};

}  // namespace hintrl::hints
