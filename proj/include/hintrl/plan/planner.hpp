#pragma once

#include <stdexcept>
#include <vector>

#include "hintrl/env/env.hpp"
#include "hintrl/hints/types.hpp"

namespace hintrl::plan {

struct Unsolvable : std::runtime_error {
    explicit Unsolvable(const std::string& what) : std::runtime_error(what) {}
};

struct Plan {
    std::vector<env::Action> actions;

    size_t length() const { return actions.size(); }
};

// Minimal-length action sequence from `state` to mission success, searched
// over the true environment dynamics within the remaining step budget.
// Deterministic: ties break by action code ascending at each expansion, so
// the result is the lexicographically least optimal sequence. Throws
// Unsolvable when no plan exists within the budget.
Plan plan(const env::WorldState& state, const env::Mission& mission);

// First action of plan(); Action::Done once the mission is already satisfied.
env::Action optimal_action(const env::WorldState& state, const env::Mission& mission);

// Ground-truth subgoal for the current mission progress.
hints::Subgoal optimal_subgoal(const env::WorldState& state, const env::Mission& mission);

}  // namespace hintrl::plan
