#pragma once

#include <filesystem>
#include <vector>

#include "hintrl/harness/config.hpp"
#include "hintrl/harness/metrics.hpp"

namespace hintrl::harness {

// Domain tags for seed-stream derivation. Training and evaluation episodes
// live in disjoint streams by construction.
inline constexpr uint64_t kTagTrainEpisode = 0x7261;
inline constexpr uint64_t kTagEvalEpisode = 0x6576;
inline constexpr uint64_t kTagAct = 0x0ac7;
inline constexpr uint64_t kTagUpdate = 0x00bd;
inline constexpr uint64_t kTagNetInit = 0x09e7;
inline constexpr uint64_t kTagQuality = 0x09a1;

uint64_t train_episode_seed(uint64_t master, int worker, long episode);
uint64_t eval_episode_seed(uint64_t master, long index);

struct RunArtifacts {
    std::filesystem::path dir;
    std::vector<MetricPoint> metrics;
    double final_win_rate = 0.0;  // trailing window at the end of training
    double eval_win_rate = -1.0;  // greedy evaluation, -1 when skipped
    long frames = 0;
    long episodes = 0;
    long llm_budget_exhausted_at = -1;  // frame count when hints fell back to neutral
    std::string checkpoint_path;
    std::string metrics_path;
    std::string hints_path;
};

// One seed of the full training loop: reset -> per-step t increment ->
// schedule check -> augment -> act -> env.step -> history push, with learner
// updates at every workers x horizon frame boundary and a MetricPoint per
// metrics interval. provider_override (optional, non-owning) replaces the
// configured provider.
RunArtifacts train_single(const ExperimentConfig& cfg, uint64_t master_seed,
                          const std::filesystem::path& run_dir,
                          hints::HintProvider* provider_override = nullptr);

// All configured seeds; writes the config echo plus seed_<n>/ subdirectories
// under cfg.out_dir.
std::vector<RunArtifacts> train(const ExperimentConfig& cfg);

}  // namespace hintrl::harness
