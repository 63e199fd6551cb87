#include "hintrl/encode/encoders.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace hintrl::encode {

using env::Color;
using env::DoorState;
using env::GridObject;
using env::Mission;
using env::ObjectKind;
using env::WorldState;

namespace {

constexpr const char* kEncodingNames[4] = {"ascii_grid", "natural_language", "tuple_list",
                                           "relative_description"};

constexpr char kAgentArrows[4] = {'^', '>', 'v', '<'};

struct PlacedObject {
    int x, y;
    GridObject obj;
};

// Non-wall objects in row-major grid order.
std::vector<PlacedObject> grid_objects(const WorldState& s) {
    std::vector<PlacedObject> out;
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x) {
            const GridObject& c = s.at(x, y);
            if (c.is_wall() || c.is_floor()) continue;
            out.push_back({x, y, c});
        }
    }
    return out;
}

std::string object_phrase(const GridObject& o) {
    std::string s = std::string(env::color_name(o.color)) + " " + env::object_kind_name(o.kind);
    if (o.kind == ObjectKind::Door) s += std::string(" (") + env::door_state_name(o.door) + ")";
    return s;
}

// Symbol classes for the ascii encoding: one symbol per distinct
// (kind, color, door state) present on the grid.
struct SymbolClass {
    ObjectKind kind;
    Color color;
    DoorState door;

    bool matches(const GridObject& o) const {
        return o.kind == kind && o.color == color && (kind != ObjectKind::Door || o.door == door);
    }
};

// Smart symbol mapping: the kind initial (uppercased) when a kind appears in
// one class only; the color initial (lowercased) when several classes share a
// kind; remaining collisions take the first unused letter, classes processed
// in (kind, color) lexicographic order.
std::vector<std::pair<SymbolClass, char>> assign_symbols(const std::vector<PlacedObject>& objects) {
    std::vector<SymbolClass> classes;
    for (const auto& p : objects) {
        SymbolClass c{p.obj.kind, p.obj.color, p.obj.door};
        bool found = false;
        for (const auto& existing : classes) {
            if (existing.kind == c.kind && existing.color == c.color &&
                (c.kind != ObjectKind::Door || existing.door == c.door)) {
                found = true;
                break;
            }
        }
        if (!found) classes.push_back(c);
    }
    std::sort(classes.begin(), classes.end(), [](const SymbolClass& a, const SymbolClass& b) {
        const std::string ka = env::object_kind_name(a.kind), kb = env::object_kind_name(b.kind);
        if (ka != kb) return ka < kb;
        const std::string ca = env::color_name(a.color), cb = env::color_name(b.color);
        if (ca != cb) return ca < cb;
        return static_cast<int>(a.door) < static_cast<int>(b.door);
    });

    std::map<ObjectKind, int> per_kind;
    for (const auto& c : classes) per_kind[c.kind] += 1;

    const std::string reserved = "#.^>v< ";
    std::string used;
    auto taken = [&](char ch) {
        return reserved.find(ch) != std::string::npos || used.find(ch) != std::string::npos;
    };

    std::vector<std::pair<SymbolClass, char>> out;
    for (const auto& c : classes) {
        char cand = per_kind[c.kind] == 1
                        ? static_cast<char>(std::toupper(env::object_kind_name(c.kind)[0]))
                        : static_cast<char>(std::tolower(env::color_name(c.color)[0]));
        if (taken(cand)) {
            cand = 0;
            for (char ch = 'A'; ch <= 'Z' && !cand; ++ch) {
                if (!taken(ch)) cand = ch;
            }
            for (char ch = 'a'; ch <= 'z' && !cand; ++ch) {
                if (!taken(ch)) cand = ch;
            }
        }
        used.push_back(cand);
        out.emplace_back(c, cand);
    }
    return out;
}

std::string carrying_phrase(const WorldState& s) {
    return std::string(env::color_name(s.carrying->color)) + " " +
           env::object_kind_name(s.carrying->kind);
}

std::string pluralize_tiles(int n) {
    return std::to_string(n) + (n == 1 ? " tile" : " tiles");
}

}  // namespace

const char* encoding_name(EncodingKind k) { return kEncodingNames[static_cast<int>(k)]; }

std::optional<EncodingKind> encoding_from_name(const std::string& name) {
    for (int i = 0; i < 4; ++i) {
        if (name == kEncodingNames[i]) return static_cast<EncodingKind>(i);
    }
    return std::nullopt;
}

EncodedState encode_ascii(const WorldState& state, const Mission& mission) {
    EncodedState enc;
    enc.kind = EncodingKind::AsciiGrid;

    const auto objects = grid_objects(state);
    const auto symbols = assign_symbols(objects);
    auto symbol_of = [&](const GridObject& o) {
        for (const auto& [cls, ch] : symbols) {
            if (cls.matches(o)) return ch;
        }
        return '?';
    };

    std::ostringstream out;
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            if (x == state.agent.x && y == state.agent.y) {
                out << kAgentArrows[static_cast<int>(state.agent.dir)];
                continue;
            }
            const GridObject& c = state.at(x, y);
            if (c.is_wall()) {
                out << '#';
            } else if (c.is_floor()) {
                out << '.';
            } else {
                out << symbol_of(c);
            }
        }
        out << '\n';
    }

    out << "LEGEND:\n";
    for (const auto& [cls, ch] : symbols) {
        GridObject rep{cls.kind, cls.color, cls.door};
        enc.legend.emplace_back(std::string(1, ch), object_phrase(rep));
        out << ch << " = " << object_phrase(rep) << '\n';
    }
    const char arrow = kAgentArrows[static_cast<int>(state.agent.dir)];
    const std::string agent_meaning = std::string("agent facing ") + env::direction_name(state.agent.dir);
    enc.legend.emplace_back(std::string(1, arrow), agent_meaning);
    out << arrow << " = " << agent_meaning << '\n';
    if (state.carrying) out << "CARRYING: " << carrying_phrase(state) << '\n';
    out << "MISSION: " << mission.text;

    enc.text = out.str();
    return enc;
}

EncodedState encode_natural(const WorldState& state, const Mission& mission) {
    EncodedState enc;
    enc.kind = EncodingKind::NaturalLanguage;
    std::ostringstream out;
    out << "Agent is facing " << env::direction_name(state.agent.dir);
    if (state.carrying) out << ", carrying a " << carrying_phrase(state);
    out << ".";
    for (const auto& p : grid_objects(state)) {
        out << " There is a " << env::color_name(p.obj.color) << " " << env::object_kind_name(p.obj.kind)
            << " at position (" << p.x << "," << p.y << ").";
    }
    out << " Mission: " << mission.text << ".";
    enc.text = out.str();
    return enc;
}

EncodedState encode_tuples(const WorldState& state, const Mission& mission) {
    EncodedState enc;
    enc.kind = EncodingKind::TupleList;
    std::ostringstream out;
    out << "Agent at (" << state.agent.x << "," << state.agent.y << ") facing "
        << env::direction_name(state.agent.dir);
    if (state.carrying) {
        out << ", carrying '" << env::color_name(state.carrying->color) << "' "
            << env::object_kind_name(state.carrying->kind);
    }
    out << ". Objects: [";
    bool first = true;
    for (const auto& p : grid_objects(state)) {
        if (!first) out << ", ";
        first = false;
        out << "('" << env::color_name(p.obj.color) << "' " << env::object_kind_name(p.obj.kind);
        if (p.obj.kind == ObjectKind::Door) out << " (" << env::door_state_name(p.obj.door) << ")";
        out << ", (" << p.x << "," << p.y << "))";
    }
    out << "]. Mission: " << mission.text << ".";
    enc.text = out.str();
    return enc;
}

EncodedState encode_relative(const WorldState& state, const Mission& mission) {
    EncodedState enc;
    enc.kind = EncodingKind::RelativeDescription;

    const int fdx = env::dir_dx(state.agent.dir), fdy = env::dir_dy(state.agent.dir);
    const int rdx = -fdy, rdy = fdx;

    std::ostringstream out;
    out << "You are facing " << env::direction_name(state.agent.dir);
    if (state.carrying) out << ", carrying a " << carrying_phrase(state);
    out << ".";
    for (const auto& p : grid_objects(state)) {
        const int dx = p.x - state.agent.x;
        const int dy = p.y - state.agent.y;
        const int ahead = dx * fdx + dy * fdy;
        const int right = dx * rdx + dy * rdy;

        std::vector<std::string> parts;
        if (ahead > 0) parts.push_back(pluralize_tiles(ahead) + " ahead");
        if (ahead < 0) parts.push_back(pluralize_tiles(-ahead) + " behind");
        if (right > 0) parts.push_back(pluralize_tiles(right) + " to your right");
        if (right < 0) parts.push_back(pluralize_tiles(-right) + " to your left");

        out << "\n" << object_phrase(p.obj) << ": ";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out << ", ";
            out << parts[i];
        }
        out << " (" << pluralize_tiles(std::abs(dx) + std::abs(dy)) << " away)";
    }
    out << "\nMission: " << mission.text << ".";
    enc.text = out.str();
    return enc;
}

EncodedState encode(EncodingKind kind, const WorldState& state, const Mission& mission) {
    switch (kind) {
        case EncodingKind::AsciiGrid: return encode_ascii(state, mission);
        case EncodingKind::NaturalLanguage: return encode_natural(state, mission);
        case EncodingKind::TupleList: return encode_tuples(state, mission);
        case EncodingKind::RelativeDescription: return encode_relative(state, mission);
    }
    return encode_ascii(state, mission);
}

}  // namespace hintrl::encode
