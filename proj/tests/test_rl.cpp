#include <cmath>

#include "doctest.h"

#include "hintrl/env/env.hpp"
#include "hintrl/rl/checkpoint.hpp"
#include "hintrl/rl/feature.hpp"
#include "hintrl/rl/gae.hpp"
#include "hintrl/rl/net.hpp"
#include "hintrl/rl/ppo.hpp"
#include "hintrl/util/error.hpp"
#include "hintrl/util/rng.hpp"
#include "test_util.hpp"

using namespace hintrl;
using env::TaskKind;
using hints::EnhancedObservation;
using hints::Hint;
using hints::Subgoal;
using rl::FeatureSpec;
using rl::PolicyNet;
using rl::PPOConfig;

namespace {

double gauss(util::Rng& rng) {
    double u1 = rng.unit();
    while (u1 <= 0.0) u1 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * rng.unit());
}

Eigen::VectorXd flatten_grads(const PolicyNet& net, const PolicyNet::Gradients& grads) {
    Eigen::VectorXd flat(net.parameter_count());
    Eigen::Index at = 0;
    for (const auto& w : grads.weights) {
        flat.segment(at, w.size()) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
        at += w.size();
    }
    for (const auto& b : grads.biases) {
        flat.segment(at, b.size()) = b;
        at += b.size();
    }
    return flat;
}

struct GradCheckBatch {
    Eigen::MatrixXd features;
    std::vector<int> actions;
    Eigen::VectorXd old_logp, advantages, returns;
};

// Batch with ratios kept away from the clip kinks so central differences see
// a smooth objective.
GradCheckBatch make_gradcheck_batch(const PolicyNet& net, const PPOConfig& cfg, util::Rng& rng,
                                    int batch_size) {
    const int dim = net.config().input_dim;
    GradCheckBatch batch;
    batch.features.resize(batch_size, dim);
    for (int i = 0; i < batch_size; ++i) {
        for (int j = 0; j < dim; ++j) batch.features(i, j) = gauss(rng);
    }
    const auto fwd = net.forward(batch.features);
    const Eigen::MatrixXd logp = rl::log_softmax(fwd.logits);

    batch.actions.resize(static_cast<size_t>(batch_size));
    batch.old_logp.resize(batch_size);
    batch.advantages.resize(batch_size);
    batch.returns.resize(batch_size);
    for (int i = 0; i < batch_size; ++i) {
        batch.actions[static_cast<size_t>(i)] = rng.below(net.config().actions);
        double noise;
        do {
            noise = (rng.unit() - 0.5) * 0.4;  // ratio = exp(-noise) in [0.82, 1.22]
        } while (std::abs(std::exp(-noise) - (1.0 + cfg.clip)) < 5e-3 ||
                 std::abs(std::exp(-noise) - (1.0 - cfg.clip)) < 5e-3);
        batch.old_logp(i) = logp(i, batch.actions[static_cast<size_t>(i)]) + noise;
        double adv = (rng.unit() - 0.5) * 4.0;
        if (std::abs(adv) < 0.1) adv = adv < 0 ? -0.1 : 0.1;
        batch.advantages(i) = adv;
        batch.returns(i) = (rng.unit() - 0.5) * 2.0;
    }
    return batch;
}

}  // namespace

TEST_CASE("featurize: layout, one-hot structure and the neutral encoding") {
    auto [state, mission] = env::reset(TaskKind::GoToObj, 3);
    const env::Observation obs = env::observe(state, mission);

    EnhancedObservation neutral;
    neutral.base = obs;
    const FeatureSpec spec{};
    const Eigen::VectorXd v = rl::featurize(neutral, spec);

    CHECK(spec.dim() == 1004);  // 980 + 8 + 8 + 1 + 7
    CHECK(v.size() == 1004);
    CHECK(v.minCoeff() >= 0.0);
    CHECK(v.maxCoeff() <= 1.0);

    // exactly one active entry per one-hot group
    constexpr int per_cell = env::kNumViewKinds + env::kNumColors + env::kNumViewStates;
    for (int cell = 0; cell < 49; ++cell) {
        CHECK(v.segment(cell * per_cell, env::kNumViewKinds).sum() == 1.0);
        CHECK(v.segment(cell * per_cell + env::kNumViewKinds, env::kNumColors).sum() == 1.0);
        CHECK(v.segment(cell * per_cell + env::kNumViewKinds + env::kNumColors, env::kNumViewStates).sum() ==
              1.0);
    }
    const int hint_base = FeatureSpec::kViewDim;
    CHECK(v.segment(hint_base, 8).sum() == 1.0);
    CHECK(v(hint_base + hints::kNeutralAction) == 1.0);  // neutral action slot
    CHECK(v.segment(hint_base + 8, 8).sum() == 1.0);
    CHECK(v(hint_base + 8 + static_cast<int>(Subgoal::None)) == 1.0);
    CHECK(v(hint_base + 16) == 0.0);  // availability bit off
    CHECK(v.segment(hint_base + 17, 7).sum() == 1.0);
    CHECK(v(hint_base + 17) == 1.0);  // carrying: none

    EnhancedObservation hinted;
    hinted.base = obs;
    hinted.hint = Hint{2, Subgoal::GoNextTo, "go"};
    hinted.hint_available = 1;
    const Eigen::VectorXd h = rl::featurize(hinted, spec);
    CHECK(h(hint_base + 2) == 1.0);
    CHECK(h(hint_base + 8 + static_cast<int>(Subgoal::GoNextTo)) == 1.0);
    CHECK(h(hint_base + 16) == 1.0);
}

TEST_CASE("featurize: +Text appends the closed-vocabulary mission bag-of-words") {
    auto [state, mission] = env::reset(TaskKind::PickupLoc, 8);
    EnhancedObservation enh;
    enh.base = env::observe(state, mission);

    const FeatureSpec with_text{true};
    const size_t vocab = rl::mission_vocabulary().size();
    CHECK(with_text.dim() == 1004 + static_cast<int>(vocab));

    const Eigen::VectorXd v = rl::featurize(enh, with_text);
    const auto& words = rl::mission_vocabulary();
    for (size_t i = 0; i < vocab; ++i) {
        const bool present = mission.text.find(words[i]) != std::string::npos;
        CHECK(v(1004 + static_cast<Eigen::Index>(i)) == (present ? 1.0 : 0.0));
    }
    // the mission always names its color, kind and (for PickupLoc) location
    CHECK(v.segment(1004, static_cast<Eigen::Index>(vocab)).sum() >= 3.0);
}

TEST_CASE("featurize is insensitive to changes outside the 7x7 view") {
    using env::Color;
    using env::Direction;
    using env::GridObject;
    env::WorldState s = test_util::make_room(12, 12, 96);
    s.agent = {2, 9, Direction::North};
    s.at(3, 8) = GridObject::ball(Color::Green);
    const env::Mission m = test_util::goto_mission(env::ObjectKind::Ball, Color::Green);

    env::WorldState far = s;
    far.at(10, 2) = GridObject::box(Color::Purple);

    EnhancedObservation a, b;
    a.base = env::observe(s, m);
    b.base = env::observe(far, m);
    const FeatureSpec spec{};
    CHECK(rl::featurize(a, spec) == rl::featurize(b, spec));
}

TEST_CASE("GAE: terminal single step has advantage exactly reward - value") {
    Eigen::VectorXd rewards(1), values(1);
    rewards << 1.0;
    values << 0.0;
    const auto g = rl::compute_gae(rewards, values, {1}, 0.99, 0.95, 123.0);  // bootstrap masked
    CHECK(g.advantages(0) == 1.0);
    CHECK(g.returns(0) == 1.0);
}

TEST_CASE("GAE with lambda=1 equals Monte-Carlo discounted advantages within 1e-9") {
    util::Rng rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + rng.below(60);
        Eigen::VectorXd rewards(n), values(n);
        std::vector<uint8_t> dones(static_cast<size_t>(n), 0);
        for (int t = 0; t < n; ++t) {
            rewards(t) = (rng.unit() - 0.3) * 2.0;
            values(t) = (rng.unit() - 0.5) * 3.0;
            dones[static_cast<size_t>(t)] = rng.unit() < 0.15 ? 1 : 0;
        }
        const double bootstrap = (rng.unit() - 0.5) * 3.0;
        const double gamma = 0.9 + 0.1 * rng.unit();

        const auto g = rl::compute_gae(rewards, values, dones, gamma, 1.0, bootstrap);

        // independent oracle: discounted reward sums per episode segment
        for (int t = 0; t < n; ++t) {
            double ret = 0.0, discount = 1.0;
            for (int j = t; j < n; ++j) {
                ret += discount * rewards(j);
                if (dones[static_cast<size_t>(j)]) break;
                discount *= gamma;
                if (j == n - 1) ret += discount * bootstrap;
            }
            CHECK(std::abs(g.advantages(t) - (ret - values(t))) < 1e-9);
            CHECK(std::abs(g.returns(t) - ret) < 1e-9);
        }
    }
}

TEST_CASE("GAE with lambda=0 collapses to one-step TD residuals exactly") {
    util::Rng rng(444);
    const int n = 40;
    Eigen::VectorXd rewards(n), values(n);
    std::vector<uint8_t> dones(static_cast<size_t>(n), 0);
    for (int t = 0; t < n; ++t) {
        rewards(t) = rng.unit();
        values(t) = rng.unit();
        dones[static_cast<size_t>(t)] = rng.unit() < 0.2 ? 1 : 0;
    }
    const double bootstrap = rng.unit();
    const double gamma = 0.97;
    const auto g = rl::compute_gae(rewards, values, dones, gamma, 0.0, bootstrap);
    for (int t = 0; t < n; ++t) {
        const double not_done = dones[static_cast<size_t>(t)] ? 0.0 : 1.0;
        const double next_v = t + 1 < n ? values(t + 1) : bootstrap;
        const double delta = rewards(t) + gamma * next_v * not_done - values(t);
        CHECK(g.advantages(t) == delta);
    }
}

TEST_CASE("GAE length mismatch is a usage error") {
    Eigen::VectorXd r(3), v(2);
    r.setZero();
    v.setZero();
    CHECK_THROWS_AS(rl::compute_gae(r, v, {0, 0, 0}, 0.99, 0.95, 0.0), util::UsageError);
}

TEST_CASE("softmax rows sum to one within 1e-6 for random nets and inputs") {
    util::Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        PolicyNet net({10, {16, 16}, 7}, rng.next());
        Eigen::MatrixXd x(4, 10);
        for (int i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng) * 3.0;
        const auto fwd = net.forward(x);
        const Eigen::MatrixXd probs = rl::log_softmax(fwd.logits).array().exp();
        for (int i = 0; i < probs.rows(); ++i) {
            CHECK(std::abs(probs.row(i).sum() - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("uniform logits have entropy ln 7 and sampling matches softmax") {
    PolicyNet net({6, {8}, 7}, 1234);
    // zero the heads: logits identically zero -> uniform policy
    net.weights[1].setZero();
    net.biases[1].setZero();

    Eigen::VectorXd feature(6);
    feature << 1, 0, 1, 0, 0.5, 0.25;
    const auto fwd = net.forward(feature.transpose());
    const Eigen::RowVectorXd logp = rl::log_softmax(fwd.logits).row(0);
    const double entropy = -(logp.array().exp() * logp.array()).sum();
    CHECK(entropy == doctest::Approx(std::log(7.0)).epsilon(1e-9));

    util::Rng rng(77);
    std::array<int, 7> counts{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) counts[static_cast<size_t>(rl::act(net, feature, rng).action)] += 1;
    const double p = 1.0 / 7.0;
    const double sigma = std::sqrt(p * (1 - p) / n);
    for (int a = 0; a < 7; ++a) {
        CHECK(std::abs(counts[static_cast<size_t>(a)] / static_cast<double>(n) - p) <= 3.0 * sigma);
    }
}

TEST_CASE("greedy action is the argmax and is deterministic") {
    PolicyNet net({5, {8}, 7}, 99);
    Eigen::VectorXd feature(5);
    feature << 0.2, -1.0, 0.5, 0.0, 1.0;
    const auto fwd = net.forward(feature.transpose());
    Eigen::Index expected;
    fwd.logits.row(0).maxCoeff(&expected);
    for (int i = 0; i < 5; ++i) CHECK(rl::act_greedy(net, feature) == static_cast<int>(expected));
}

TEST_CASE("analytic PPO gradient matches central finite differences") {
    PPOConfig cfg;
    cfg.clip = 0.2;
    cfg.value_coef = 0.5;
    cfg.entropy_coef = 0.01;

    util::Rng rng(2718);
    PolicyNet net({12, {16}, 7}, 555);  // 16-unit hidden layer
    const GradCheckBatch batch = make_gradcheck_batch(net, cfg, rng, 8);

    const auto [loss, grads] = rl::ppo_loss_grad(net, batch.features, batch.actions, batch.old_logp,
                                                 batch.advantages, batch.returns, cfg);
    CHECK(std::isfinite(loss.total));
    const Eigen::VectorXd analytic = flatten_grads(net, grads);

    const double h = 1e-5;
    Eigen::VectorXd theta = net.flat_parameters();
    PolicyNet probe = net;
    double max_rel = 0.0;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(i) += h;
        tm(i) -= h;
        probe.set_flat_parameters(tp);
        const double lp = rl::ppo_loss(probe, batch.features, batch.actions, batch.old_logp,
                                       batch.advantages, batch.returns, cfg)
                              .total;
        probe.set_flat_parameters(tm);
        const double lm = rl::ppo_loss(probe, batch.features, batch.actions, batch.old_logp,
                                       batch.advantages, batch.returns, cfg)
                              .total;
        const double numeric = (lp - lm) / (2.0 * h);
        const double rel =
            std::abs(analytic(i) - numeric) / std::max(1e-6, std::abs(analytic(i)) + std::abs(numeric));
        max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel < 1e-4);
}

TEST_CASE("clipped samples contribute zero policy gradient") {
    PPOConfig cfg;
    cfg.clip = 0.2;
    cfg.value_coef = 0.0;    // isolate the policy term
    cfg.entropy_coef = 0.0;

    PolicyNet net({4, {8}, 7}, 11);
    Eigen::MatrixXd x(1, 4);
    x << 0.5, -0.5, 1.0, 0.0;
    const auto fwd = net.forward(x);
    const Eigen::MatrixXd logp = rl::log_softmax(fwd.logits);

    std::vector<int> actions = {3};
    Eigen::VectorXd old_logp(1), adv(1), ret(1);
    adv << 2.0;                            // positive advantage
    old_logp << logp(0, 3) - 0.5;          // ratio = e^0.5 ~ 1.65 > 1 + clip
    ret << 0.0;

    const auto [loss, grads] = rl::ppo_loss_grad(net, x, actions, old_logp, adv, ret, cfg);
    CHECK(loss.clip_fraction == 1.0);
    CHECK(flatten_grads(net, grads).norm() == 0.0);
}

TEST_CASE("one small update step decreases the loss on a fixed toy batch") {
    PPOConfig cfg;
    cfg.lr = 1e-3;

    util::Rng rng(161);
    PolicyNet net({12, {16}, 7}, 21);
    const GradCheckBatch batch = make_gradcheck_batch(net, cfg, rng, 32);

    const double before = rl::ppo_loss(net, batch.features, batch.actions, batch.old_logp,
                                       batch.advantages, batch.returns, cfg)
                              .total;
    auto [loss, grads] = rl::ppo_loss_grad(net, batch.features, batch.actions, batch.old_logp,
                                           batch.advantages, batch.returns, cfg);
    rl::AdamOptimizer adam(cfg.lr);
    adam.step(net, grads);
    const double after = rl::ppo_loss(net, batch.features, batch.actions, batch.old_logp,
                                      batch.advantages, batch.returns, cfg)
                             .total;
    CHECK(after < before);
}

TEST_CASE("rollout buffer lifecycle and ppo_update statistics") {
    const int workers = 2, horizon = 16, dim = 12;
    PPOConfig cfg;
    cfg.workers = workers;
    cfg.horizon = horizon;
    cfg.minibatch = 8;
    cfg.epochs = 2;
    cfg.hidden = {16};

    util::Rng rng(5150);
    PolicyNet net({dim, cfg.hidden, 7}, 31);
    rl::AdamOptimizer adam(cfg.lr);
    rl::RolloutBuffer buffer(workers, horizon, dim);

    CHECK_THROWS_AS(rl::ppo_update(net, adam, buffer, cfg, rng), util::UsageError);

    Eigen::VectorXd feature(dim);
    for (int t = 0; t < horizon; ++t) {
        for (int w = 0; w < workers; ++w) {
            for (int j = 0; j < dim; ++j) feature(j) = rng.unit();
            const auto act = rl::act(net, feature, rng);
            buffer.add(w, feature, act.action, act.log_prob, act.value, rng.unit() * 0.1,
                       t == horizon - 1 && w == 0);
        }
    }
    CHECK(buffer.full());
    Eigen::VectorXd bootstrap(workers);
    bootstrap << 0.3, -0.1;
    buffer.finish(bootstrap, cfg.gamma, cfg.lam);
    CHECK(buffer.finished());
    CHECK(buffer.advantages().size() == workers * horizon);

    const auto stats = rl::ppo_update(net, adam, buffer, cfg, rng);
    CHECK(stats.value_loss >= 0.0);
    CHECK(stats.clip_fraction >= 0.0);
    CHECK(stats.clip_fraction <= 1.0);
    CHECK(stats.grad_norm >= 0.0);
    CHECK(std::isfinite(stats.policy_loss));
    CHECK_FALSE(buffer.full());  // cleared by the update
}

TEST_CASE("ppo_update is deterministic given identical seeds and data") {
    const int workers = 2, horizon = 8, dim = 6;
    PPOConfig cfg;
    cfg.workers = workers;
    cfg.horizon = horizon;
    cfg.minibatch = 4;
    cfg.hidden = {8};

    auto run = [&]() {
        util::Rng data_rng(777);
        PolicyNet net({dim, cfg.hidden, 7}, 13);
        rl::AdamOptimizer adam(cfg.lr);
        rl::RolloutBuffer buffer(workers, horizon, dim);
        Eigen::VectorXd feature(dim);
        for (int t = 0; t < horizon; ++t) {
            for (int w = 0; w < workers; ++w) {
                for (int j = 0; j < dim; ++j) feature(j) = data_rng.unit();
                const auto act = rl::act(net, feature, data_rng);
                buffer.add(w, feature, act.action, act.log_prob, act.value, data_rng.unit(), false);
            }
        }
        buffer.finish(Eigen::VectorXd::Zero(workers), cfg.gamma, cfg.lam);
        util::Rng update_rng(42);
        rl::ppo_update(net, adam, buffer, cfg, update_rng);
        return net.flat_parameters();
    };
    const Eigen::VectorXd a = run();
    const Eigen::VectorXd b = run();
    CHECK(a == b);
}

TEST_CASE("checkpoints round-trip and reject mismatched feature dimensions") {
    const auto dir = test_util::scratch_dir("checkpoints");
    const std::string path = (dir / "checkpoint.json").string();

    const FeatureSpec spec{};
    PolicyNet net({spec.dim(), {32, 32}, 7}, 3);
    rl::save_checkpoint(path, net, spec, {{"note", "test"}});

    const rl::Checkpoint ckpt = rl::load_checkpoint(path);
    CHECK(ckpt.net_config.input_dim == spec.dim());
    CHECK(ckpt.meta.at("note") == "test");
    const PolicyNet restored = rl::restore_net(ckpt, spec.dim());
    CHECK(restored.flat_parameters() == net.flat_parameters());

    Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, spec.dim());
    CHECK(net.forward(x).logits == restored.forward(x).logits);

    // +Text checkpoints must not load into a base-feature harness
    CHECK_THROWS_AS(rl::restore_net(ckpt, FeatureSpec{true}.dim()), util::ConfigError);
    CHECK_THROWS_AS(rl::load_checkpoint((dir / "missing.json").string()), util::ConfigError);
}
