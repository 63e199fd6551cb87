#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hintrl::env {

// Primitive actions. Integer codes are shared system-wide: encoders, hint
// providers and the policy head all use the same numbering.
enum class Action : int {
    TurnLeft = 0,
    TurnRight = 1,
    MoveForward = 2,
    Pickup = 3,
    Drop = 4,
    Toggle = 5,
    Done = 6,
};

inline constexpr int kNumActions = 7;

const char* action_name(Action a);
bool is_action_code(int code);
Action action_from_code(int code);  // throws UsageError when out of range

enum class Direction : int { North = 0, East = 1, South = 2, West = 3 };

const char* direction_name(Direction d);
// Unit vectors in grid coordinates: x = column, y = row, origin top-left.
int dir_dx(Direction d);
int dir_dy(Direction d);
Direction turn_left(Direction d);
Direction turn_right(Direction d);

enum class ObjectKind : int { Wall = 0, Floor = 1, Key = 2, Ball = 3, Box = 4, Door = 5 };

inline constexpr int kNumObjectKinds = 6;

const char* object_kind_name(ObjectKind k);

enum class Color : int { Red = 0, Green = 1, Blue = 2, Purple = 3, Yellow = 4, Grey = 5 };

inline constexpr int kNumColors = 6;

const char* color_name(Color c);

enum class DoorState : int { Open = 0, Closed = 1 };

const char* door_state_name(DoorState s);

// One grid cell. `door` is meaningful only when kind == Door (door_state()
// reflects that).
struct GridObject {
    ObjectKind kind = ObjectKind::Floor;
    Color color = Color::Red;
    DoorState door = DoorState::Open;

    std::optional<DoorState> door_state() const {
        if (kind == ObjectKind::Door) return door;
        return std::nullopt;
    }
    bool is_floor() const { return kind == ObjectKind::Floor; }
    bool is_wall() const { return kind == ObjectKind::Wall; }
    bool is_pickable() const {
        return kind == ObjectKind::Key || kind == ObjectKind::Ball || kind == ObjectKind::Box;
    }

    static GridObject wall() { return {ObjectKind::Wall, Color::Grey, DoorState::Open}; }
    static GridObject floor() { return {}; }
    static GridObject key(Color c) { return {ObjectKind::Key, c, DoorState::Open}; }
    static GridObject ball(Color c) { return {ObjectKind::Ball, c, DoorState::Open}; }
    static GridObject box(Color c) { return {ObjectKind::Box, c, DoorState::Open}; }
    static GridObject make_door(Color c, DoorState s) { return {ObjectKind::Door, c, s}; }

    bool operator==(const GridObject&) const = default;
};

struct AgentPose {
    int x = 0;
    int y = 0;
    Direction dir = Direction::North;

    bool operator==(const AgentPose&) const = default;
};

enum class TaskKind : int { GoToObj = 0, OpenDoor = 1, PickupLoc = 2 };

const char* task_kind_name(TaskKind t);
std::optional<TaskKind> task_kind_from_name(const std::string& name);

struct Mission {
    TaskKind task = TaskKind::GoToObj;
    ObjectKind target_kind = ObjectKind::Key;
    Color target_color = Color::Red;
    std::string location;       // PickupLoc only, e.g. "in the top-left corner"
    bool open_required = true;  // OpenDoor: success means door open (vs merely reached)
    std::string text;

    bool operator==(const Mission&) const = default;
};

struct WorldState {
    int width = 0;
    int height = 0;
    std::vector<GridObject> grid;  // row-major, width * height
    AgentPose agent;
    std::optional<GridObject> carrying;
    int step_count = 0;
    int max_steps = 0;
    uint64_t rng_seed = 0;

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    GridObject& at(int x, int y) { return grid[static_cast<size_t>(y) * width + x]; }
    const GridObject& at(int x, int y) const { return grid[static_cast<size_t>(y) * width + x]; }

    bool operator==(const WorldState&) const = default;
};

// Cell codes used in Observation triples and the per-cell kind one-hot.
// The numbering leaves room for the standard gridworld vocabulary even
// though only a subset occurs here.
inline constexpr int kViewUnseen = 0;
inline constexpr int kViewEmpty = 1;
inline constexpr int kViewWall = 2;
inline constexpr int kViewDoor = 4;
inline constexpr int kViewKey = 5;
inline constexpr int kViewBall = 6;
inline constexpr int kViewBox = 7;
inline constexpr int kNumViewKinds = 11;
inline constexpr int kNumViewStates = 3;

int view_kind_code(ObjectKind k);

// Egocentric 7x7 partial view: agent at bottom-center facing up, each cell a
// (kind, color, state) triple, occluded cells all-zero (unseen).
struct Observation {
    static constexpr int kViewSize = 7;

    std::array<std::array<int, 3>, kViewSize * kViewSize> view{};
    std::string mission_text;
    std::optional<int> carrying;  // ObjectKind code of the carried object

    const std::array<int, 3>& cell(int vx, int vy) const { return view[static_cast<size_t>(vy) * kViewSize + vx]; }
    std::array<int, 3>& cell(int vx, int vy) { return view[static_cast<size_t>(vy) * kViewSize + vx]; }

    bool operator==(const Observation&) const = default;
};

}  // namespace hintrl::env
