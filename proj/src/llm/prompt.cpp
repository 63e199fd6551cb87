#include <cctype>
#include <string>

#include "hintrl/llm/client.hpp"

namespace hintrl::llm {

namespace {

constexpr const char* kSystemPrompt =
    "You are an expert planner guiding an agent through a grid world, one step at a time.\n"
    "\n"
    "The agent's primitive actions are:\n"
    "0 = turn_left\n"
    "1 = turn_right\n"
    "2 = move_forward\n"
    "3 = pickup (pick up the object directly ahead)\n"
    "4 = drop (drop the carried object onto the empty cell directly ahead)\n"
    "5 = toggle (open or close the door directly ahead)\n"
    "6 = done (no-op)\n"
    "\n"
    "Subgoals describe the agent's current objective:\n"
    "GoNextToSubgoal = navigate next to a target object\n"
    "PickupSubgoal = pick up a specific object\n"
    "DropSubgoal = drop the currently carried object\n"
    "OpenSubgoal = open a door or container\n"
    "CloseSubgoal = close a door or container\n"
    "ExploreSubgoal = explore the environment to locate objects\n"
    "done = task completed successfully\n"
    "none = no specific subgoal\n"
    "\n"
    "Think step by step about the state and the mission first. Then answer with exactly one block\n"
    "of this form:\n"
    "Prediction(\n"
    "  reasoning=\"<one or two sentences of reasoning>\",\n"
    "  primitive_action=<integer 0-6>,\n"
    "  subgoal=<one subgoal name>\n"
    ")";

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

bool parse_int_strict(const std::string& s, int* out) {
    if (s.empty()) return false;
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    long value = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        value = value * 10 + (s[i] - '0');
        if (value > 1000000) break;  // caller range-checks anyway
    }
    *out = s[0] == '-' ? static_cast<int>(-value) : static_cast<int>(value);
    return true;
}

// Splits on commas at parenthesis depth zero outside quotes.
std::vector<std::string> split_fields(const std::string& body) {
    std::vector<std::string> fields;
    std::string cur;
    int depth = 0;
    char quote = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (quote != 0) {
            if (c == '\\' && i + 1 < body.size()) {
                cur.push_back(c);
                cur.push_back(body[++i]);
                continue;
            }
            if (c == quote) quote = 0;
            cur.push_back(c);
            continue;
        }
        if (c == '"' || c == '\'') {
            quote = c;
            cur.push_back(c);
        } else if (c == '(') {
            ++depth;
            cur.push_back(c);
        } else if (c == ')') {
            --depth;
            cur.push_back(c);
        } else if (c == ',' && depth == 0) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty()) fields.push_back(cur);
    return fields;
}

}  // namespace

Prompt build_prompt(const encode::EncodedState& encoded, const hints::ActionHistory& history,
                    const env::Mission& mission) {
    Prompt p;
    p.system = kSystemPrompt;

    std::string user = "Current state:\n" + encoded.text + "\n\n";
    if (history.empty()) {
        user += "Previous actions: (none)\n";
    } else {
        user += "Previous actions:\n";
        for (const std::string& line : history.formatted()) user += line + "\n";
    }
    // Every encoding embeds the mission; only add it for bare states.
    if (encoded.text.find(mission.text) == std::string::npos) {
        user += "\nMission: " + mission.text + "\n";
    }
    user += "\nWhat is the best next action for the agent?";
    p.user = user;
    return p;
}

std::optional<Prediction> parse_prediction(const std::string& raw, std::string* error) {
    auto fail = [&](const std::string& why) -> std::optional<Prediction> {
        if (error != nullptr) *error = why;
        return std::nullopt;
    };

    const std::string marker = "Prediction(";
    const size_t at = raw.rfind(marker);
    if (at == std::string::npos) return fail("no Prediction( block found");

    // Find the matching close paren, quote-aware; a truncated block is
    // tolerated by taking the remainder of the text.
    const size_t body_begin = at + marker.size();
    size_t body_end = raw.size();
    int depth = 1;
    char quote = 0;
    for (size_t i = body_begin; i < raw.size(); ++i) {
        const char c = raw[i];
        if (quote != 0) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
            continue;
        }
        if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth == 0) {
                body_end = i;
                break;
            }
        }
    }

    Prediction pred;
    bool have_action = false;
    for (const std::string& field : split_fields(raw.substr(body_begin, body_end - body_begin))) {
        const size_t eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string name = trim(field.substr(0, eq));
        const std::string value = trim(field.substr(eq + 1));
        if (name == "reasoning") {
            pred.reasoning = strip_quotes(value);
        } else if (name == "primitive_action") {
            int action = 0;
            if (!parse_int_strict(strip_quotes(value), &action)) {
                return fail("primitive_action is not an integer: " + value);
            }
            if (!env::is_action_code(action)) {
                return fail("primitive_action out of range: " + std::to_string(action));
            }
            pred.primitive_action = action;
            have_action = true;
        } else if (name == "subgoal") {
            const std::string sg = strip_quotes(value);
            auto parsed = hints::subgoal_from_name(sg);
            if (!parsed) return fail("unknown subgoal: " + sg);
            pred.subgoal = *parsed;
        }
        // unknown field names are ignored
    }
    if (!have_action) return fail("missing primitive_action field");
    return pred;
}

}  // namespace hintrl::llm
