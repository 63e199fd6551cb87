#include "hintrl/plan/planner.hpp"

#include <cstdlib>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>

namespace hintrl::plan {

using env::Action;
using env::Mission;
using env::ObjectKind;
using env::WorldState;
using hints::Subgoal;

namespace {

// Canonical key over the mission-relevant dynamic state: agent pose, carried
// object, and every movable/toggleable cell. Static walls and the step
// counter are excluded, so revisiting a configuration is recognized
// regardless of when it happens.
std::string dynamic_key(const WorldState& s) {
    std::string k;
    k.reserve(8 + s.grid.size() / 4);
    k.push_back(static_cast<char>(s.agent.x));
    k.push_back(static_cast<char>(s.agent.y));
    k.push_back(static_cast<char>(s.agent.dir));
    if (s.carrying) {
        k.push_back(static_cast<char>(s.carrying->kind));
        k.push_back(static_cast<char>(s.carrying->color));
    } else {
        k.push_back('\x7f');
        k.push_back('\x7f');
    }
    for (size_t i = 0; i < s.grid.size(); ++i) {
        const env::GridObject& c = s.grid[i];
        if (c.is_wall() || c.is_floor()) continue;
        k.push_back(static_cast<char>(i & 0xff));
        k.push_back(static_cast<char>((i >> 8) & 0xff));
        k.push_back(static_cast<char>(c.kind));
        k.push_back(static_cast<char>(c.color));
        k.push_back(static_cast<char>(c.kind == ObjectKind::Door ? c.door : env::DoorState::Open));
    }
    return k;
}

}  // namespace

Plan plan(const WorldState& start, const Mission& mission) {
    if (env::is_success(start, mission)) return {};

    const int budget = start.max_steps - start.step_count;
    if (budget <= 0) throw Unsolvable("no steps remaining");

    struct Edge {
        std::string parent;
        Action action;
    };
    std::unordered_map<std::string, Edge> visited;
    std::deque<std::pair<WorldState, int>> frontier;

    const std::string start_key = dynamic_key(start);
    visited.emplace(start_key, Edge{std::string(), Action::Done});
    frontier.emplace_back(start, 0);

    while (!frontier.empty()) {
        auto [state, depth] = std::move(frontier.front());
        frontier.pop_front();
        if (depth >= budget) continue;
        const std::string key = dynamic_key(state);

        for (int code = 0; code < env::kNumActions; ++code) {
            const Action action = static_cast<Action>(code);
            WorldState next = state;
            env::step(next, action, mission);
            std::string next_key = dynamic_key(next);
            if (visited.count(next_key)) continue;
            visited.emplace(next_key, Edge{key, action});
            if (env::is_success(next, mission)) {
                Plan result;
                std::string cur = std::move(next_key);
                while (cur != start_key) {
                    const Edge& e = visited.at(cur);
                    result.actions.push_back(e.action);
                    cur = e.parent;
                }
                std::reverse(result.actions.begin(), result.actions.end());
                return result;
            }
            frontier.emplace_back(std::move(next), depth + 1);
        }
    }
    throw Unsolvable("no plan within remaining step budget");
}

Action optimal_action(const WorldState& state, const Mission& mission) {
    if (env::is_success(state, mission)) return Action::Done;
    return plan(state, mission).actions.front();
}

Subgoal optimal_subgoal(const WorldState& state, const Mission& mission) {
    if (env::is_success(state, mission)) return Subgoal::Done;

    const auto tc = env::target_cell(state, mission);
    if (!tc) {
        // The agent is holding the navigation target; it has to go back down.
        return Subgoal::Drop;
    }
    const int dist = std::abs(tc->first - state.agent.x) + std::abs(tc->second - state.agent.y);
    if (dist != 1) return Subgoal::GoNextTo;

    switch (mission.task) {
        case env::TaskKind::PickupLoc:
            return state.carrying ? Subgoal::Drop : Subgoal::Pickup;
        case env::TaskKind::OpenDoor:
            if (mission.open_required &&
                state.at(tc->first, tc->second).door == env::DoorState::Closed) {
                return Subgoal::Open;
            }
            return Subgoal::GoNextTo;
        case env::TaskKind::GoToObj:
            return Subgoal::GoNextTo;
    }
    return Subgoal::GoNextTo;
}

}  // namespace hintrl::plan
