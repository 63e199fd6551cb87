#include "hintrl/hints/augment.hpp"
#include "hintrl/hints/provider.hpp"

#include <cmath>

#include "doctest.h"

#include "hintrl/env/env.hpp"
#include "hintrl/plan/planner.hpp"
#include "hintrl/util/error.hpp"
#include "test_util.hpp"

using namespace hintrl;
using env::Action;
using env::Color;
using env::Direction;
using env::GridObject;
using env::Mission;
using env::ObjectKind;
using env::TaskKind;
using env::WorldState;
using hints::ActionHistory;
using hints::Hint;
using hints::HintContext;
using hints::Subgoal;

namespace {

struct CountingProvider : hints::HintProvider {
    int calls = 0;
    std::string name() const override { return "counting"; }
    hints::HintResult get_hint(const HintContext&) override {
        ++calls;
        hints::HintResult r;
        r.hint = Hint{2, Subgoal::GoNextTo, ""};
        return r;
    }
};

struct FailingProvider : hints::HintProvider {
    std::string name() const override { return "failing"; }
    hints::HintResult get_hint(const HintContext&) override {
        throw std::runtime_error("provider exploded");
    }
};

}  // namespace

TEST_CASE("oracle provider suggests the planner action with its subgoal") {
    WorldState s = test_util::make_room(6, 6);
    s.agent = {2, 4, Direction::North};
    s.at(2, 1) = GridObject::key(Color::Red);
    const Mission m = test_util::goto_mission(ObjectKind::Key, Color::Red);
    ActionHistory history(5);
    hints::OracleProvider oracle;
    const auto r = oracle.get_hint({s, m, history, encode::EncodingKind::AsciiGrid, 0, 5});
    CHECK(r.ok);
    CHECK(r.hint.action == 2);  // move_forward
    CHECK(r.hint.subgoal == Subgoal::GoNextTo);
}

TEST_CASE("neutral provider always returns the distinguished neutral value") {
    auto [state, mission] = env::reset(TaskKind::GoToObj, 5);
    ActionHistory history(5);
    hints::NeutralProvider neutral;
    const auto r = neutral.get_hint({state, mission, history, encode::EncodingKind::AsciiGrid, 0, 1});
    CHECK(r.ok);
    CHECK(r.hint == Hint::neutral());
    CHECK(r.hint.action == hints::kNeutralAction);
    CHECK(r.hint.subgoal == Subgoal::None);
}

TEST_CASE("noisy provider corruption rates at the extremes") {
    auto [state, mission] = env::reset(TaskKind::GoToObj, 9);
    ActionHistory history(5);
    const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, 1};
    const int oracle_action = static_cast<int>(plan::optimal_action(state, mission));

    hints::NoisyProvider always(1.0, 42);
    hints::NoisyProvider never(0.0, 43);
    for (int i = 0; i < 1000; ++i) {
        const auto corrupted = always.get_hint(ctx);
        CHECK(corrupted.hint.action != oracle_action);
        CHECK(env::is_action_code(corrupted.hint.action));
        CHECK(never.get_hint(ctx).hint.action == oracle_action);
    }
}

TEST_CASE("noisy provider agreement rate approaches 1 - epsilon") {
    auto [state, mission] = env::reset(TaskKind::GoToObj, 11);
    ActionHistory history(5);
    const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, 1};
    const int oracle_action = static_cast<int>(plan::optimal_action(state, mission));

    const double eps = 0.3;
    const int n = 10000;
    hints::NoisyProvider noisy(eps, 7);
    int agree = 0;
    for (int i = 0; i < n; ++i) {
        if (noisy.get_hint(ctx).hint.action == oracle_action) ++agree;
    }
    const double rate = static_cast<double>(agree) / n;
    const double se = std::sqrt(eps * (1 - eps) / n);
    CHECK(std::abs(rate - (1.0 - eps)) <= 3.0 * se);
}

TEST_CASE("schedule_due: first hint lands on step k") {
    CHECK(hints::schedule_due(5, 5));
    CHECK_FALSE(hints::schedule_due(7, 5));
    CHECK(hints::schedule_due(10, 5));
    for (int t = 1; t <= 20; ++t) CHECK(hints::schedule_due(t, 1));
    CHECK_FALSE(hints::schedule_due(1, 5));
    CHECK_FALSE(hints::schedule_due(4, 5));
    CHECK_THROWS_AS(hints::schedule_due(3, 0), util::ConfigError);
}

TEST_CASE("a 64-step episode with k=5 issues exactly 12 hints") {
    int due = 0;
    for (int t = 1; t <= 64; ++t) due += hints::schedule_due(t, 5) ? 1 : 0;
    CHECK(due == 64 / 5);
}

TEST_CASE("augment attaches provider hints only on due steps") {
    auto [state, mission] = env::reset(TaskKind::GoToObj, 3);
    const env::Observation obs = env::observe(state, mission);
    ActionHistory history(5);
    CountingProvider provider;

    SUBCASE("due step: hint flows through with availability 1") {
        const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, 5};
        const auto enh = hints::augment(obs, ctx, 5, &provider);
        CHECK(enh.hint_available == 1);
        CHECK(enh.hint.action == 2);
        CHECK(enh.base == obs);  // provider isolation: base passes through untouched
        CHECK(provider.calls == 1);
    }
    SUBCASE("off-schedule step: neutral hint and the provider is not invoked") {
        const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, 3};
        const auto enh = hints::augment(obs, ctx, 5, &provider);
        CHECK(enh.hint_available == 0);
        CHECK(enh.hint == Hint::neutral());
        CHECK(provider.calls == 0);
    }
    SUBCASE("failing provider degrades to neutral and never aborts") {
        FailingProvider failing;
        for (int t = 5; t <= 20; t += 5) {
            const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, t};
            hints::HintResult result;
            const auto enh = hints::augment(obs, ctx, 5, &failing, nullptr, &result);
            CHECK(enh.hint_available == 0);
            CHECK(enh.hint == Hint::neutral());
            CHECK_FALSE(result.ok);
            CHECK(result.error == "provider exploded");
        }
    }
}

TEST_CASE("hint_available = 0 always carries the exact neutral hint") {
    auto [state, mission] = env::reset(TaskKind::PickupLoc, 13);
    const env::Observation obs = env::observe(state, mission);
    ActionHistory history(5);
    hints::OracleProvider oracle;
    for (int t = 1; t <= 15; ++t) {
        const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, t};
        const auto enh = hints::augment(obs, ctx, 5, &oracle);
        if (enh.hint_available == 0) {
            CHECK(enh.hint == Hint::neutral());
        } else {
            CHECK(t % 5 == 0);
        }
    }
}

TEST_CASE("action history is a strict ring of the last p actions") {
    ActionHistory history(5);
    CHECK(history.empty());
    CHECK(history.formatted().empty());

    for (int i = 1; i <= 6; ++i) {
        history.push(i, static_cast<Action>((i - 1) % env::kNumActions));
    }
    CHECK(history.size() == 5);
    CHECK(history.entries().front().step_index == 2);  // oldest evicted
    CHECK(history.entries().back().step_index == 6);

    const auto lines = history.formatted();
    REQUIRE(lines.size() == 5);
    CHECK(lines.front() == "step 2: turn_right");
    CHECK(lines.back() == "step 6: toggle");

    CHECK_THROWS_AS(history.push(6, Action::Done), util::UsageError);
    CHECK_THROWS_AS(history.push(3, Action::Done), util::UsageError);
}

TEST_CASE("hint log round-trips and feeds the replay provider") {
    const auto dir = test_util::scratch_dir("hint_log");
    const std::string path = (dir / "hints.jsonl").string();

    {
        hints::HintLogWriter writer(path);
        hints::HintLogRecord rec;
        rec.episode = 1000001;
        rec.t = 5;
        rec.encoding_kind = "ascii_grid";
        rec.hint_action = 2;
        rec.subgoal = "GoNextToSubgoal";
        rec.provider = "oracle";
        rec.latency_ms = 0.25;
        rec.reasoning = "shortest path";
        writer.append(rec);
        rec.t = 10;
        rec.hint_action = 3;
        rec.subgoal = "PickupSubgoal";
        writer.append(rec);
    }

    const auto records = hints::read_hint_log(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].episode == 1000001);
    CHECK(records[0].t == 5);
    CHECK(records[0].hint_action == 2);
    CHECK(records[1].subgoal == "PickupSubgoal");

    hints::ReplayProvider replay(path);
    auto [state, mission] = env::reset(TaskKind::GoToObj, 1);
    ActionHistory history(5);
    const auto hit = replay.get_hint({state, mission, history, encode::EncodingKind::AsciiGrid, 1000001, 5});
    CHECK(hit.hint.action == 2);
    CHECK(hit.hint.subgoal == Subgoal::GoNextTo);
    const auto miss = replay.get_hint({state, mission, history, encode::EncodingKind::AsciiGrid, 1000001, 15});
    CHECK(miss.hint == Hint::neutral());
}

TEST_CASE("subgoal names round-trip, case-insensitively") {
    for (int i = 0; i < hints::kNumSubgoals; ++i) {
        const auto sg = static_cast<Subgoal>(i);
        CHECK(hints::subgoal_from_name(hints::subgoal_name(sg)) == sg);
    }
    CHECK(hints::subgoal_from_name("gonexttosubgoal") == Subgoal::GoNextTo);
    CHECK(hints::subgoal_from_name("DONE") == Subgoal::Done);
    CHECK_FALSE(hints::subgoal_from_name("FlySubgoal").has_value());
}

TEST_CASE("anti-oracle provider never matches the oracle action") {
    util::Rng rng(55);
    hints::AntiOracleProvider anti;
    for (int trial = 0; trial < 20; ++trial) {
        auto [state, mission] = env::reset(static_cast<TaskKind>(rng.below(3)), rng.next(), {6, 0, true});
        ActionHistory history(5);
        const HintContext ctx{state, mission, history, encode::EncodingKind::AsciiGrid, 0, 5};
        const int oracle_action = static_cast<int>(plan::optimal_action(state, mission));
        CHECK(anti.get_hint(ctx).hint.action != oracle_action);
    }
}
