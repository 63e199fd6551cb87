#include "hintrl/hints/provider.hpp"

#include "hintrl/hints/augment.hpp"
#include "hintrl/plan/planner.hpp"

namespace hintrl::hints {

namespace {

// Ground-truth hints ignore the episode timer: plan on a copy with a relaxed
// step budget so late-episode queries still get the optimal action.
int oracle_action(const HintContext& ctx) {
    if (env::is_success(ctx.state, ctx.mission)) return static_cast<int>(env::Action::Done);
    env::WorldState relaxed = ctx.state;
    relaxed.max_steps = std::max(relaxed.max_steps,
                                 relaxed.step_count + 8 * relaxed.width * relaxed.height);
    return static_cast<int>(plan::plan(relaxed, ctx.mission).actions.front());
}

}  // namespace

HintResult OracleProvider::get_hint(const HintContext& ctx) {
    HintResult r;
    try {
        Hint h;
        h.action = oracle_action(ctx);
        h.subgoal = plan::optimal_subgoal(ctx.state, ctx.mission);
        r.hint = h;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

HintResult AntiOracleProvider::get_hint(const HintContext& ctx) {
    HintResult r;
    try {
        const int oracle = oracle_action(ctx);
        Hint h;
        h.action = (oracle + 1) % env::kNumActions;
        h.subgoal = Subgoal::None;
        r.hint = h;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

HintResult NoisyProvider::get_hint(const HintContext& ctx) {
    HintResult r;
    try {
        const int oracle = oracle_action(ctx);
        Hint h;
        h.action = oracle;
        h.subgoal = plan::optimal_subgoal(ctx.state, ctx.mission);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (rng_.chance(epsilon_)) {
                int pick = rng_.below(env::kNumActions - 1);
                if (pick >= h.action) ++pick;  // uniform over the six other actions
                h.action = pick;
            }
        }
        r.hint = h;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

ReplayProvider::ReplayProvider(const std::string& log_path) {
    for (const HintLogRecord& rec : read_hint_log(log_path)) {
        if (!rec.error.empty()) continue;
        Hint h;
        h.action = rec.hint_action;
        h.subgoal = subgoal_from_name(rec.subgoal).value_or(Subgoal::None);
        h.reasoning = rec.reasoning;
        hints_.emplace(std::make_pair(rec.episode, rec.t), std::move(h));
    }
}

HintResult ReplayProvider::get_hint(const HintContext& ctx) {
    HintResult r;
    auto it = hints_.find(std::make_pair(ctx.episode, ctx.t));
    if (it != hints_.end()) r.hint = it->second;
    return r;
}

}  // namespace hintrl::hints
