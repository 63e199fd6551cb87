#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hintrl/env/types.hpp"

namespace hintrl::hints {

// The eight-element subgoal catalog. `None` doubles as the neutral value.
enum class Subgoal : int {
    GoNextTo = 0,
    Pickup = 1,
    Drop = 2,
    Open = 3,
    Close = 4,
    Explore = 5,
    Done = 6,
    None = 7,
};

inline constexpr int kNumSubgoals = 8;

const char* subgoal_name(Subgoal s);
// Case-insensitive; accepts the catalog names ("GoNextToSubgoal", "done", ...).
std::optional<Subgoal> subgoal_from_name(const std::string& name);

// Action code 7 is the distinguished neutral value, one past the real range.
inline constexpr int kNeutralAction = env::kNumActions;

struct Hint {
    int action = kNeutralAction;  // 0..6, or 7 for neutral
    Subgoal subgoal = Subgoal::None;
    std::string reasoning;

    bool is_neutral() const { return action == kNeutralAction && subgoal == Subgoal::None; }
    static Hint neutral() { return {}; }

    bool operator==(const Hint&) const = default;
};

// Rolling buffer of the p most recent actions, oldest first.
class ActionHistory {
public:
    struct Entry {
        int step_index;
        env::Action action;
    };

    explicit ActionHistory(int capacity) : capacity_(capacity) {}

    // step_index must be strictly greater than the last pushed index.
    void push(int step_index, env::Action action);
    void clear() { entries_.clear(); }

    int capacity() const { return capacity_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    // "step <i>: <action name>" lines, oldest first.
    std::vector<std::string> formatted() const;

private:
    int capacity_;
    std::vector<Entry> entries_;
};

struct EnhancedObservation {
    env::Observation base;
    Hint hint;
    int hint_available = 0;  // 1 only when a provider hint was attached
};

}  // namespace hintrl::hints
