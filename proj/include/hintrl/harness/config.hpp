#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hintrl/encode/encoders.hpp"
#include "hintrl/env/env.hpp"
#include "hintrl/hints/provider.hpp"
#include "hintrl/llm/client.hpp"
#include "hintrl/rl/ppo.hpp"

namespace hintrl::harness {

enum class ProviderKind { None, Neutral, Oracle, AntiOracle, Noisy, Replay, Llm };

const char* provider_kind_name(ProviderKind k);
std::optional<ProviderKind> provider_kind_from_name(const std::string& name);

struct HintsConfig {
    std::string provider = "neutral";
    int k = 5;
    int p = 5;
    double epsilon = 1.0;      // noisy provider corruption rate
    std::string replay_path;   // replay provider source log
    std::string encoding = "ascii_grid";
};

struct ExperimentConfig {
    std::string task = "gotoobj";
    int room_size = 6;
    int max_steps = 0;  // 0 derives 8 * room_size
    std::string opendoor_success = "open";
    bool mission_text_features = false;  // the "+Text" condition
    long frame_budget = 500000;
    std::vector<uint64_t> seeds = {1, 2, 3};
    std::vector<uint64_t> eval_seeds;  // optional explicit list; must not overlap seeds
    int eval_episodes = 100;
    long metrics_interval = 10000;
    double early_stop_win_rate = 0.0;  // > 0: end a run once the trailing win rate crosses
    std::string out_dir = "runs/exp";
    std::string run_name;
    bool trace_schedule = false;  // per-step schedule audit log (tests)

    HintsConfig hints;
    llm::LlmConfig llm;
    rl::PPOConfig ppo;

    env::TaskKind task_kind() const;
    env::EnvConfig env_config() const;
    encode::EncodingKind encoding_kind() const;
    ProviderKind provider_kind() const;

    void validate() const;  // throws ConfigError naming the offending key

    nlohmann::json to_json() const;
    // Rejects unknown keys anywhere in the document.
    static ExperimentConfig from_json(const nlohmann::json& j);
    // File + dot-path overrides ("hints.provider=oracle"); override values
    // parse as JSON when possible, else as strings.
    static ExperimentConfig load(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
    static ExperimentConfig from_json_with_overrides(nlohmann::json j,
                                                     const std::vector<std::string>& overrides);
};

// Provider instance for the configured kind; nullptr for "none" (hints
// disabled). Noisy providers draw from a stream derived from `master_seed`.
std::unique_ptr<hints::HintProvider> make_provider(const ExperimentConfig& cfg, uint64_t master_seed);

}  // namespace hintrl::harness
