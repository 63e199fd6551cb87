#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "json.hpp"

#include "hintrl/env/types.hpp"

namespace hintrl::env {

struct EnvConfig {
    int room_size = 8;   // full grid side including the wall border
    int max_steps = 0;   // 0 derives 8 * room_size
    bool opendoor_success_open = true;  // false: reaching (facing) the door counts

    int effective_max_steps() const { return max_steps > 0 ? max_steps : 8 * room_size; }
};

struct ResetResult {
    WorldState state;
    Mission mission;
};

// Deterministic, solvable instance for (task, seed). Identical inputs yield
// identical instances; unsolvable layouts are regenerated internally from a
// derived sub-seed.
ResetResult reset(TaskKind task, uint64_t seed, const EnvConfig& cfg = {});

struct StepResult {
    double reward = 0.0;
    bool done = false;
};

// Applies one primitive action in place. Throws UsageError when the episode
// has already terminated.
StepResult step(WorldState& state, Action action, const Mission& mission);

bool is_success(const WorldState& state, const Mission& mission);

// Full-grid debug dump (fixed glyphs, no smart symbol mapping).
std::string render_plain(const WorldState& state);

// Instance snapshot for replay files.
nlohmann::json snapshot_to_json(const WorldState& state, const Mission& mission);
std::pair<WorldState, Mission> snapshot_from_json(const nlohmann::json& j);

Observation observe(const WorldState& state, const Mission& mission);

// Position of the mission target on the grid (the unique matching object or
// door); nullopt when absent, e.g. a picked-up target.
std::optional<std::pair<int, int>> target_cell(const WorldState& state, const Mission& mission);

}  // namespace hintrl::env
