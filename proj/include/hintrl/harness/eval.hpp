#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hintrl/harness/config.hpp"
#include "hintrl/rl/net.hpp"

namespace hintrl::harness {

// Greedy-policy win rate over fresh evaluation episodes. Evaluation episode
// seeds come from cfg.eval_seeds when given, else from a stream disjoint from
// the training stream. Throws UsageError for episodes < 1 and ConfigError
// when the network input dim does not match the config's feature layout.
double evaluate_policy(const ExperimentConfig& cfg, const rl::PolicyNet& net,
                       hints::HintProvider* provider, int episodes, uint64_t master_seed);

// Checkpoint-file variant; builds the provider from the config.
double evaluate_policy_checkpoint(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                                  int episodes, uint64_t master_seed);

struct HintQualityRecord {
    int sample_id = 0;
    std::string encoding_kind;
    std::string encoding_text;
    int hint_action = 0;
    std::string hint_subgoal;
    std::string reasoning;
    int oracle_action = 0;
    bool optimal_match = false;
    std::string provider;
    std::string error;  // provider failure note, empty on success

    // state_awareness / action_reasoning stay null for manual annotation.
    std::string to_jsonl() const;
};

struct HintQualitySummary {
    int samples = 0;
    int matches = 0;
    double match_rate = 0.0;
};

// H1 harness: samples states by rolling a random policy to a uniformly random
// depth in [0, max_steps/2], queries the provider, and judges the hint
// against the planner's optimal action. Provider failures are recorded as
// non-matches with an error note; nothing aborts the sweep. Writes one
// JSONL record per sample to out_path when non-empty.
std::pair<std::vector<HintQualityRecord>, HintQualitySummary> evaluate_hint_quality(
    hints::HintProvider& provider, const ExperimentConfig& cfg, int n_samples, uint64_t master_seed,
    const std::string& out_path = "");

}  // namespace hintrl::harness
