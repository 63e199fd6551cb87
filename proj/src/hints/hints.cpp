#include "hintrl/hints/augment.hpp"
#include "hintrl/hints/types.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hintrl/util/error.hpp"

namespace hintrl::hints {

using util::ConfigError;
using util::UsageError;

namespace {

constexpr const char* kSubgoalNames[kNumSubgoals] = {
    "GoNextToSubgoal", "PickupSubgoal", "DropSubgoal", "OpenSubgoal",
    "CloseSubgoal",    "ExploreSubgoal", "done",        "none"};

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

const char* subgoal_name(Subgoal s) { return kSubgoalNames[static_cast<int>(s)]; }

std::optional<Subgoal> subgoal_from_name(const std::string& name) {
    const std::string needle = lower(name);
    for (int i = 0; i < kNumSubgoals; ++i) {
        if (needle == lower(kSubgoalNames[i])) return static_cast<Subgoal>(i);
    }
    return std::nullopt;
}

void ActionHistory::push(int step_index, env::Action action) {
    if (!entries_.empty() && step_index <= entries_.back().step_index) {
        throw UsageError("ActionHistory.push: step index must be strictly increasing");
    }
    entries_.push_back({step_index, action});
    if (static_cast<int>(entries_.size()) > capacity_) entries_.erase(entries_.begin());
}

std::vector<std::string> ActionHistory::formatted() const {
    std::vector<std::string> lines;
    lines.reserve(entries_.size());
    for (const Entry& e : entries_) {
        lines.push_back("step " + std::to_string(e.step_index) + ": " + env::action_name(e.action));
    }
    return lines;
}

bool schedule_due(int t, int k) {
    if (k < 1) throw ConfigError("hint frequency k must be >= 1");
    return t % k == 0;
}

std::string HintLogRecord::to_jsonl() const {
    nlohmann::json j = {
        {"episode", episode},   {"t", t},
        {"encoding_kind", encoding_kind}, {"hint_action", hint_action},
        {"subgoal", subgoal},   {"provider", provider},
        {"latency_ms", latency_ms}, {"reasoning", reasoning},
    };
    if (!error.empty()) j["error"] = error;
    return j.dump();
}

struct HintLogWriter::Impl {
    std::ofstream out;
    std::mutex mutex;
};

HintLogWriter::HintLogWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::out | std::ios::trunc);
    if (!impl_->out) throw ConfigError("cannot open hint log for writing: " + path);
}

HintLogWriter::~HintLogWriter() = default;

void HintLogWriter::append(const HintLogRecord& rec) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->out << rec.to_jsonl() << '\n';
}

void HintLogWriter::flush() {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->out.flush();
}

std::vector<HintLogRecord> read_hint_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open hint log: " + path);
    std::vector<HintLogRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        HintLogRecord rec;
        rec.episode = j.at("episode").get<int64_t>();
        rec.t = j.at("t").get<int>();
        rec.encoding_kind = j.at("encoding_kind").get<std::string>();
        rec.hint_action = j.at("hint_action").get<int>();
        rec.subgoal = j.at("subgoal").get<std::string>();
        rec.provider = j.at("provider").get<std::string>();
        rec.latency_ms = j.at("latency_ms").get<double>();
        rec.reasoning = j.at("reasoning").get<std::string>();
        if (j.contains("error")) rec.error = j.at("error").get<std::string>();
        records.push_back(std::move(rec));
    }
    return records;
}

EnhancedObservation augment(const env::Observation& obs, const HintContext& ctx, int k,
                            HintProvider* provider, HintLogWriter* log, HintResult* out_result) {
    EnhancedObservation enhanced;
    enhanced.base = obs;
    if (!schedule_due(ctx.t, k) || provider == nullptr) {
        return enhanced;  // neutral hint, hint_available = 0, provider untouched
    }

    HintResult result;
    try {
        result = provider->get_hint(ctx);
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
        result.hint = Hint::neutral();
    }
    if (out_result != nullptr) *out_result = result;

    // A neutral value means "no hint", so it never flags availability; that
    // keeps a neutral provider indistinguishable from disabled hints.
    if (result.ok && !result.hint.is_neutral()) {
        enhanced.hint = result.hint;
        enhanced.hint_available = 1;
    } else {
        enhanced.hint = Hint::neutral();
        enhanced.hint_available = 0;
    }

    if (log != nullptr) {
        HintLogRecord rec;
        rec.episode = ctx.episode;
        rec.t = ctx.t;
        rec.encoding_kind = encode::encoding_name(ctx.encoding);
        rec.hint_action = enhanced.hint.action;
        rec.subgoal = subgoal_name(enhanced.hint.subgoal);
        rec.provider = provider->name();
        rec.latency_ms = result.latency_ms;
        rec.reasoning = enhanced.hint.reasoning;
        rec.error = result.error;
        log->append(rec);
    }
    return enhanced;
}

}  // namespace hintrl::hints
