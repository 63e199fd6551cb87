#include "hintrl/env/env.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <sstream>

#include "hintrl/util/error.hpp"
#include "hintrl/util/rng.hpp"

namespace hintrl::env {

using util::ConfigError;
using util::Rng;
using util::UsageError;

namespace {

constexpr const char* kActionNames[kNumActions] = {
    "turn_left", "turn_right", "move_forward", "pickup", "drop", "toggle", "done"};

constexpr const char* kDirectionNames[4] = {"north", "east", "south", "west"};
constexpr int kDirDx[4] = {0, 1, 0, -1};
constexpr int kDirDy[4] = {-1, 0, 1, 0};

constexpr const char* kObjectKindNames[kNumObjectKinds] = {"wall", "floor", "key", "ball", "box", "door"};
constexpr const char* kColorNames[kNumColors] = {"red", "green", "blue", "purple", "yellow", "grey"};
constexpr const char* kTaskNames[3] = {"gotoobj", "opendoor", "pickuploc"};

constexpr ObjectKind kPickableKinds[3] = {ObjectKind::Key, ObjectKind::Ball, ObjectKind::Box};

}  // namespace

const char* action_name(Action a) { return kActionNames[static_cast<int>(a)]; }

bool is_action_code(int code) { return code >= 0 && code < kNumActions; }

Action action_from_code(int code) {
    if (!is_action_code(code)) throw UsageError("action code out of range: " + std::to_string(code));
    return static_cast<Action>(code);
}

const char* direction_name(Direction d) { return kDirectionNames[static_cast<int>(d)]; }
int dir_dx(Direction d) { return kDirDx[static_cast<int>(d)]; }
int dir_dy(Direction d) { return kDirDy[static_cast<int>(d)]; }
Direction turn_left(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }
Direction turn_right(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }

const char* object_kind_name(ObjectKind k) { return kObjectKindNames[static_cast<int>(k)]; }
const char* color_name(Color c) { return kColorNames[static_cast<int>(c)]; }
const char* door_state_name(DoorState s) { return s == DoorState::Open ? "open" : "closed"; }
const char* task_kind_name(TaskKind t) { return kTaskNames[static_cast<int>(t)]; }

std::optional<TaskKind> task_kind_from_name(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        if (name == kTaskNames[i]) return static_cast<TaskKind>(i);
    }
    return std::nullopt;
}

int view_kind_code(ObjectKind k) {
    switch (k) {
        case ObjectKind::Wall: return kViewWall;
        case ObjectKind::Floor: return kViewEmpty;
        case ObjectKind::Key: return kViewKey;
        case ObjectKind::Ball: return kViewBall;
        case ObjectKind::Box: return kViewBox;
        case ObjectKind::Door: return kViewDoor;
    }
    return kViewUnseen;
}

namespace {

std::string describe(const GridObject& o) {
    std::string s = std::string(color_name(o.color)) + " " + object_kind_name(o.kind);
    if (o.kind == ObjectKind::Door) s += std::string(" (") + door_state_name(o.door) + ")";
    return s;
}

// Region phrase for PickupLoc missions: the interior is split into thirds
// along each axis.
std::string region_phrase(int x, int y, int width, int height) {
    const int tx = (x - 1) * 3 / (width - 2);
    const int ty = (y - 1) * 3 / (height - 2);
    if (tx == 1 && ty == 1) return "in the middle of the room";
    if (tx == 0 && ty == 0) return "in the top-left corner";
    if (tx == 2 && ty == 0) return "in the top-right corner";
    if (tx == 0 && ty == 2) return "in the bottom-left corner";
    if (tx == 2 && ty == 2) return "in the bottom-right corner";
    if (ty == 0) return "at the top of the room";
    if (ty == 2) return "at the bottom of the room";
    if (tx == 0) return "on the left side";
    return "on the right side";
}

WorldState empty_room(int size, int max_steps) {
    WorldState s;
    s.width = size;
    s.height = size;
    s.max_steps = max_steps;
    s.grid.assign(static_cast<size_t>(size) * size, GridObject::floor());
    for (int x = 0; x < size; ++x) {
        s.at(x, 0) = GridObject::wall();
        s.at(x, size - 1) = GridObject::wall();
    }
    for (int y = 0; y < size; ++y) {
        s.at(0, y) = GridObject::wall();
        s.at(size - 1, y) = GridObject::wall();
    }
    return s;
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        std::swap(v[i], v[static_cast<size_t>(rng.below(i + 1))]);
    }
}

std::vector<std::pair<int, int>> interior_cells(const WorldState& s) {
    std::vector<std::pair<int, int>> cells;
    for (int y = 1; y < s.height - 1; ++y) {
        for (int x = 1; x < s.width - 1; ++x) cells.emplace_back(x, y);
    }
    return cells;
}

// Solvability check used by generation: breadth-first search over agent
// poses (objects treated as static obstacles, so this is conservative for
// layouts that would need a pickup to clear a path). The instance must be
// finishable within max_steps.
bool solvable(const WorldState& s, const Mission& m) {
    auto tc = target_cell(s, m);
    if (!tc) return false;
    auto [tx, ty] = *tc;

    auto passable = [&](int x, int y) {
        const GridObject& c = s.at(x, y);
        return c.is_floor() || (c.kind == ObjectKind::Door && c.door == DoorState::Open);
    };
    // pose BFS: steps to stand adjacent to the target, facing it
    std::vector<int> dist(s.grid.size() * 4, -1);
    auto idx = [&](int x, int y, int d) { return (static_cast<size_t>(y) * s.width + x) * 4 + d; };
    std::queue<std::tuple<int, int, int>> q;
    dist[idx(s.agent.x, s.agent.y, static_cast<int>(s.agent.dir))] = 0;
    q.emplace(s.agent.x, s.agent.y, static_cast<int>(s.agent.dir));
    int facing_steps = -1;
    while (!q.empty() && facing_steps < 0) {
        auto [x, y, d] = q.front();
        q.pop();
        const int at = dist[idx(x, y, d)];
        if (x + kDirDx[d] == tx && y + kDirDy[d] == ty) {
            facing_steps = at;
            break;
        }
        auto visit = [&](int nx, int ny, int nd) {
            if (dist[idx(nx, ny, nd)] >= 0) return;
            dist[idx(nx, ny, nd)] = at + 1;
            q.emplace(nx, ny, nd);
        };
        visit(x, y, (d + 3) % 4);
        visit(x, y, (d + 1) % 4);
        const int fx = x + kDirDx[d], fy = y + kDirDy[d];
        if (s.in_bounds(fx, fy) && passable(fx, fy)) visit(fx, fy, d);
    }
    if (facing_steps < 0) return false;

    // final interaction: pickup for PickupLoc, toggle for OpenDoor-open
    int extra = 0;
    if (m.task == TaskKind::PickupLoc) extra = 1;
    if (m.task == TaskKind::OpenDoor && m.open_required) extra = 1;
    return facing_steps + extra <= s.max_steps;
}

ResetResult generate(TaskKind task, uint64_t sub_seed, const EnvConfig& cfg) {
    if (cfg.room_size < 4) throw ConfigError("room_size must be at least 4");
    Rng rng(sub_seed);
    WorldState state = empty_room(cfg.room_size, cfg.effective_max_steps());
    Mission mission;
    mission.task = task;
    mission.open_required = cfg.opendoor_success_open;

    auto cells = interior_cells(state);
    shuffle_in_place(cells, rng);
    size_t next_cell = 0;

    state.agent.x = cells[next_cell].first;
    state.agent.y = cells[next_cell].second;
    ++next_cell;
    state.agent.dir = static_cast<Direction>(rng.below(4));

    switch (task) {
        case TaskKind::GoToObj: {
            // Single room, no doors, exactly one candidate target object.
            mission.target_kind = kPickableKinds[rng.below(3)];
            mission.target_color = static_cast<Color>(rng.below(kNumColors));
            auto [x, y] = cells[next_cell++];
            state.at(x, y) = GridObject{mission.target_kind, mission.target_color, DoorState::Open};
            mission.text = std::string("go to the ") + color_name(mission.target_color) + " " +
                           object_kind_name(mission.target_kind);
            break;
        }
        case TaskKind::OpenDoor: {
            std::vector<std::pair<int, int>> border;
            for (int x = 1; x < state.width - 1; ++x) {
                border.emplace_back(x, 0);
                border.emplace_back(x, state.height - 1);
            }
            for (int y = 1; y < state.height - 1; ++y) {
                border.emplace_back(0, y);
                border.emplace_back(state.width - 1, y);
            }
            shuffle_in_place(border, rng);
            std::vector<Color> colors = {Color::Red, Color::Green, Color::Blue,
                                         Color::Purple, Color::Yellow, Color::Grey};
            shuffle_in_place(colors, rng);
            const int n_doors = 1 + rng.below(3);
            for (int i = 0; i < n_doors; ++i) {
                auto [x, y] = border[static_cast<size_t>(i)];
                state.at(x, y) = GridObject::make_door(colors[static_cast<size_t>(i)], DoorState::Closed);
            }
            mission.target_kind = ObjectKind::Door;
            mission.target_color = colors[static_cast<size_t>(rng.below(n_doors))];
            mission.text = std::string("open the ") + color_name(mission.target_color) + " door";
            break;
        }
        case TaskKind::PickupLoc: {
            mission.target_kind = kPickableKinds[rng.below(3)];
            mission.target_color = static_cast<Color>(rng.below(kNumColors));
            auto [tx, ty] = cells[next_cell++];
            state.at(tx, ty) = GridObject{mission.target_kind, mission.target_color, DoorState::Open};
            mission.location = region_phrase(tx, ty, state.width, state.height);

            // Distractors with (kind,color) distinct from the target and from
            // each other, so the mission descriptor stays unambiguous.
            std::vector<std::pair<ObjectKind, Color>> pool;
            for (ObjectKind k : kPickableKinds) {
                for (int c = 0; c < kNumColors; ++c) {
                    if (k == mission.target_kind && static_cast<Color>(c) == mission.target_color) continue;
                    pool.emplace_back(k, static_cast<Color>(c));
                }
            }
            shuffle_in_place(pool, rng);
            const int max_distractors = cfg.room_size >= 8 ? 3 : 2;
            const int n_distractors = 1 + rng.below(max_distractors);
            for (int i = 0; i < n_distractors; ++i) {
                auto [x, y] = cells[next_cell++];
                auto [k, c] = pool[static_cast<size_t>(i)];
                state.at(x, y) = GridObject{k, c, DoorState::Open};
            }
            mission.text = std::string("pick up the ") + color_name(mission.target_color) + " " +
                           object_kind_name(mission.target_kind) + " " + mission.location;
            break;
        }
    }
    return {std::move(state), std::move(mission)};
}

}  // namespace

ResetResult reset(TaskKind task, uint64_t seed, const EnvConfig& cfg) {
    for (uint64_t attempt = 0; attempt < 64; ++attempt) {
        ResetResult r = generate(task, util::mix(seed, attempt), cfg);
        // a fresh episode must not start in the success state
        if (!is_success(r.state, r.mission) && solvable(r.state, r.mission)) {
            r.state.rng_seed = seed;
            r.state.step_count = 0;
            return r;
        }
    }
    throw ConfigError("failed to generate a solvable instance (room too small for task?)");
}

bool is_success(const WorldState& state, const Mission& mission) {
    switch (mission.task) {
        case TaskKind::GoToObj: {
            const int fx = state.agent.x + dir_dx(state.agent.dir);
            const int fy = state.agent.y + dir_dy(state.agent.dir);
            if (!state.in_bounds(fx, fy)) return false;
            const GridObject& front = state.at(fx, fy);
            return front.kind == mission.target_kind && front.color == mission.target_color;
        }
        case TaskKind::OpenDoor: {
            if (mission.open_required) {
                auto tc = target_cell(state, mission);
                if (!tc) return false;
                return state.at(tc->first, tc->second).door == DoorState::Open;
            }
            const int fx = state.agent.x + dir_dx(state.agent.dir);
            const int fy = state.agent.y + dir_dy(state.agent.dir);
            if (!state.in_bounds(fx, fy)) return false;
            const GridObject& front = state.at(fx, fy);
            return front.kind == ObjectKind::Door && front.color == mission.target_color;
        }
        case TaskKind::PickupLoc:
            return state.carrying && state.carrying->kind == mission.target_kind &&
                   state.carrying->color == mission.target_color;
    }
    return false;
}

StepResult step(WorldState& state, Action action, const Mission& mission) {
    if (state.step_count >= state.max_steps || is_success(state, mission)) {
        throw UsageError("step() called on a terminated episode");
    }

    const int fx = state.agent.x + dir_dx(state.agent.dir);
    const int fy = state.agent.y + dir_dy(state.agent.dir);
    const bool front_ok = state.in_bounds(fx, fy);

    switch (action) {
        case Action::TurnLeft:
            state.agent.dir = turn_left(state.agent.dir);
            break;
        case Action::TurnRight:
            state.agent.dir = turn_right(state.agent.dir);
            break;
        case Action::MoveForward:
            if (front_ok) {
                const GridObject& front = state.at(fx, fy);
                if (front.is_floor() || (front.kind == ObjectKind::Door && front.door == DoorState::Open)) {
                    state.agent.x = fx;
                    state.agent.y = fy;
                }
            }
            break;
        case Action::Pickup:
            if (front_ok && !state.carrying && state.at(fx, fy).is_pickable()) {
                state.carrying = state.at(fx, fy);
                state.at(fx, fy) = GridObject::floor();
            }
            break;
        case Action::Drop:
            if (front_ok && state.carrying && state.at(fx, fy).is_floor()) {
                state.at(fx, fy) = *state.carrying;
                state.carrying.reset();
            }
            break;
        case Action::Toggle:
            if (front_ok && state.at(fx, fy).kind == ObjectKind::Door) {
                GridObject& door = state.at(fx, fy);
                door.door = door.door == DoorState::Open ? DoorState::Closed : DoorState::Open;
            }
            break;
        case Action::Done:
            break;
    }

    state.step_count += 1;
    StepResult r;
    const bool success = is_success(state, mission);
    r.done = success || state.step_count >= state.max_steps;
    r.reward = success
                   ? 1.0 - 0.9 * (static_cast<double>(state.step_count) / static_cast<double>(state.max_steps))
                   : 0.0;
    return r;
}

std::optional<std::pair<int, int>> target_cell(const WorldState& state, const Mission& mission) {
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            const GridObject& c = state.at(x, y);
            if (c.kind == mission.target_kind && c.color == mission.target_color) return std::make_pair(x, y);
        }
    }
    return std::nullopt;
}

Observation observe(const WorldState& state, const Mission& mission) {
    constexpr int n = Observation::kViewSize;
    Observation obs;
    obs.mission_text = mission.text;
    if (state.carrying) obs.carrying = static_cast<int>(state.carrying->kind);

    // Map view coordinates to world cells: agent at bottom-center (3, 6)
    // facing up.
    const int fdx = dir_dx(state.agent.dir), fdy = dir_dy(state.agent.dir);
    const int rdx = -fdy, rdy = fdx;  // 90 degrees clockwise
    auto world_of = [&](int vx, int vy) {
        const int fwd = (n - 1) - vy;
        const int right = vx - n / 2;
        return std::make_pair(state.agent.x + fwd * fdx + right * rdx,
                              state.agent.y + fwd * fdy + right * rdy);
    };

    // Visibility sweep from the agent cell; walls and closed doors are opaque.
    bool mask[n][n] = {};
    mask[n / 2][n - 1] = true;
    auto transparent = [&](int vx, int vy) {
        auto [wx, wy] = world_of(vx, vy);
        if (!state.in_bounds(wx, wy)) return false;
        const GridObject& c = state.at(wx, wy);
        if (c.is_wall()) return false;
        if (c.kind == ObjectKind::Door && c.door == DoorState::Closed) return false;
        return true;
    };
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n - 1; ++i) {
            if (!mask[i][j] || !transparent(i, j)) continue;
            mask[i + 1][j] = true;
            if (j > 0) {
                mask[i + 1][j - 1] = true;
                mask[i][j - 1] = true;
            }
        }
        for (int i = n - 1; i >= 1; --i) {
            if (!mask[i][j] || !transparent(i, j)) continue;
            mask[i - 1][j] = true;
            if (j > 0) {
                mask[i - 1][j - 1] = true;
                mask[i][j - 1] = true;
            }
        }
    }

    for (int vy = 0; vy < n; ++vy) {
        for (int vx = 0; vx < n; ++vx) {
            auto& cell = obs.cell(vx, vy);
            auto [wx, wy] = world_of(vx, vy);
            if (!mask[vx][vy] || !state.in_bounds(wx, wy)) {
                cell = {kViewUnseen, 0, 0};
                continue;
            }
            const GridObject& c = state.at(wx, wy);
            cell[0] = view_kind_code(c.kind);
            cell[1] = c.is_floor() ? 0 : static_cast<int>(c.color);
            cell[2] = c.kind == ObjectKind::Door && c.door == DoorState::Closed ? 1 : 0;
        }
    }
    return obs;
}

std::string render_plain(const WorldState& state) {
    static constexpr char kArrows[4] = {'^', '>', 'v', '<'};
    std::ostringstream out;
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            if (x == state.agent.x && y == state.agent.y) {
                out << kArrows[static_cast<int>(state.agent.dir)];
                continue;
            }
            const GridObject& c = state.at(x, y);
            switch (c.kind) {
                case ObjectKind::Wall: out << '#'; break;
                case ObjectKind::Floor: out << '.'; break;
                case ObjectKind::Key: out << 'K'; break;
                case ObjectKind::Ball: out << 'O'; break;
                case ObjectKind::Box: out << 'B'; break;
                case ObjectKind::Door: out << (c.door == DoorState::Open ? 'd' : 'D'); break;
            }
        }
        out << '\n';
    }
    out << "agent: (" << state.agent.x << "," << state.agent.y << ") facing "
        << direction_name(state.agent.dir);
    if (state.carrying) out << ", carrying " << describe(*state.carrying);
    out << "\nsteps: " << state.step_count << "/" << state.max_steps << '\n';
    return out.str();
}

nlohmann::json snapshot_to_json(const WorldState& state, const Mission& mission) {
    nlohmann::json cells = nlohmann::json::array();
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            const GridObject& c = state.at(x, y);
            if (c.is_floor()) continue;
            nlohmann::json jc = {{"x", x}, {"y", y}, {"kind", object_kind_name(c.kind)},
                                 {"color", color_name(c.color)}};
            if (c.kind == ObjectKind::Door) jc["state"] = door_state_name(c.door);
            cells.push_back(std::move(jc));
        }
    }
    nlohmann::json j = {
        {"width", state.width},
        {"height", state.height},
        {"max_steps", state.max_steps},
        {"step_count", state.step_count},
        {"seed", state.rng_seed},
        {"agent", {{"x", state.agent.x}, {"y", state.agent.y}, {"dir", direction_name(state.agent.dir)}}},
        {"cells", std::move(cells)},
        {"mission",
         {{"task", task_kind_name(mission.task)},
          {"kind", object_kind_name(mission.target_kind)},
          {"color", color_name(mission.target_color)},
          {"location", mission.location},
          {"open_required", mission.open_required},
          {"text", mission.text}}},
    };
    if (state.carrying) {
        j["carrying"] = {{"kind", object_kind_name(state.carrying->kind)},
                         {"color", color_name(state.carrying->color)}};
    } else {
        j["carrying"] = nullptr;
    }
    return j;
}

namespace {

template <typename Enum, int N>
Enum enum_from_name(const std::string& name, const char* const (&names)[N], const char* what) {
    for (int i = 0; i < N; ++i) {
        if (name == names[i]) return static_cast<Enum>(i);
    }
    throw UsageError(std::string("unknown ") + what + ": " + name);
}

}  // namespace

std::pair<WorldState, Mission> snapshot_from_json(const nlohmann::json& j) {
    WorldState s;
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.max_steps = j.at("max_steps").get<int>();
    s.step_count = j.at("step_count").get<int>();
    s.rng_seed = j.at("seed").get<uint64_t>();
    s.grid.assign(static_cast<size_t>(s.width) * s.height, GridObject::floor());
    for (const auto& jc : j.at("cells")) {
        GridObject o;
        o.kind = enum_from_name<ObjectKind>(jc.at("kind").get<std::string>(), kObjectKindNames, "object kind");
        o.color = enum_from_name<Color>(jc.at("color").get<std::string>(), kColorNames, "color");
        if (o.kind == ObjectKind::Door) {
            o.door = jc.at("state").get<std::string>() == "open" ? DoorState::Open : DoorState::Closed;
        }
        s.at(jc.at("x").get<int>(), jc.at("y").get<int>()) = o;
    }
    s.agent.x = j.at("agent").at("x").get<int>();
    s.agent.y = j.at("agent").at("y").get<int>();
    s.agent.dir = enum_from_name<Direction>(j.at("agent").at("dir").get<std::string>(), kDirectionNames, "direction");
    if (!j.at("carrying").is_null()) {
        GridObject o;
        o.kind = enum_from_name<ObjectKind>(j.at("carrying").at("kind").get<std::string>(), kObjectKindNames,
                                            "object kind");
        o.color = enum_from_name<Color>(j.at("carrying").at("color").get<std::string>(), kColorNames, "color");
        s.carrying = o;
    }
    Mission m;
    const auto& jm = j.at("mission");
    m.task = enum_from_name<TaskKind>(jm.at("task").get<std::string>(), kTaskNames, "task");
    m.target_kind = enum_from_name<ObjectKind>(jm.at("kind").get<std::string>(), kObjectKindNames, "object kind");
    m.target_color = enum_from_name<Color>(jm.at("color").get<std::string>(), kColorNames, "color");
    m.location = jm.at("location").get<std::string>();
    m.open_required = jm.at("open_required").get<bool>();
    m.text = jm.at("text").get<std::string>();
    return {std::move(s), std::move(m)};
}

}  // namespace hintrl::env
