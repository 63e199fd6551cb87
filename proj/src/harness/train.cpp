#include "hintrl/harness/train.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <numeric>

#include "hintrl/harness/eval.hpp"
#include "hintrl/hints/augment.hpp"
#include "hintrl/rl/checkpoint.hpp"
#include "hintrl/rl/feature.hpp"
#include "hintrl/util/rng.hpp"

namespace hintrl::harness {

namespace fs = std::filesystem;

uint64_t train_episode_seed(uint64_t master, int worker, long episode) {
    return util::mix(master, kTagTrainEpisode, static_cast<uint64_t>(worker),
                     static_cast<uint64_t>(episode));
}

uint64_t eval_episode_seed(uint64_t master, long index) {
    return util::mix(master, kTagEvalEpisode, static_cast<uint64_t>(index));
}

namespace {

struct Worker {
    env::WorldState state;
    env::Mission mission;
    hints::ActionHistory history;
    util::Rng act_rng;
    long episode_index = -1;
    int64_t episode_id = 0;
    int t = 0;
    double episode_return = 0.0;

    Worker(int p, uint64_t rng_seed) : history(p), act_rng(rng_seed) {}
};

}  // namespace

RunArtifacts train_single(const ExperimentConfig& cfg, uint64_t master_seed, const fs::path& run_dir,
                          hints::HintProvider* provider_override) {
    cfg.validate();
    fs::create_directories(run_dir);
    const auto wall_start = std::chrono::steady_clock::now();

    const env::TaskKind task = cfg.task_kind();
    const env::EnvConfig env_cfg = cfg.env_config();
    const encode::EncodingKind encoding = cfg.encoding_kind();
    const rl::FeatureSpec spec{cfg.mission_text_features};
    const int dim = spec.dim();
    const int n_workers = cfg.ppo.workers;

    rl::PolicyNet net({dim, cfg.ppo.hidden, env::kNumActions}, util::mix(master_seed, kTagNetInit));
    rl::AdamOptimizer adam(cfg.ppo.lr);
    rl::RolloutBuffer buffer(n_workers, cfg.ppo.horizon, dim);
    util::Rng update_rng(util::mix(master_seed, kTagUpdate));

    std::unique_ptr<hints::HintProvider> owned_provider;
    hints::HintProvider* provider = provider_override;
    if (provider == nullptr) {
        owned_provider = make_provider(cfg, master_seed);
        provider = owned_provider.get();
    }

    RunArtifacts artifacts;
    artifacts.dir = run_dir;
    artifacts.metrics_path = (run_dir / "metrics.jsonl").string();
    artifacts.hints_path = (run_dir / "hints.jsonl").string();
    artifacts.checkpoint_path = (run_dir / "checkpoint.json").string();

    hints::HintLogWriter hint_log(artifacts.hints_path);
    std::ofstream metrics_out(artifacts.metrics_path);
    std::ofstream trace;
    if (cfg.trace_schedule) trace.open((run_dir / "trace.jsonl").string());

    std::vector<Worker> workers;
    workers.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back(cfg.hints.p, util::mix(master_seed, kTagAct, static_cast<uint64_t>(w)));
    }
    auto reset_worker = [&](int widx) {
        Worker& w = workers[static_cast<size_t>(widx)];
        w.episode_index += 1;
        w.episode_id = static_cast<int64_t>(widx) * 1000000 + w.episode_index;
        auto rr = env::reset(task, train_episode_seed(master_seed, widx, w.episode_index), env_cfg);
        w.state = std::move(rr.state);
        w.mission = std::move(rr.mission);
        w.history.clear();
        w.t = 0;
        w.episode_return = 0.0;
    };
    for (int w = 0; w < n_workers; ++w) reset_worker(w);

    long frames = 0;
    long episodes = 0;
    std::deque<int> win_window;
    std::deque<double> return_window;
    auto win_rate = [&] {
        if (win_window.empty()) return 0.0;
        return std::accumulate(win_window.begin(), win_window.end(), 0.0) /
               static_cast<double>(win_window.size());
    };
    auto mean_return = [&] {
        if (return_window.empty()) return 0.0;
        return std::accumulate(return_window.begin(), return_window.end(), 0.0) /
               static_cast<double>(return_window.size());
    };

    Eigen::MatrixXd pending(n_workers, dim);
    long next_emit = cfg.metrics_interval;
    bool stop_early = false;

    while (frames < cfg.frame_budget && !stop_early) {
        // Hint schedule + featurization for the upcoming step (Algorithm 1's
        // augment happens before the action on every step).
        for (int widx = 0; widx < n_workers; ++widx) {
            Worker& w = workers[static_cast<size_t>(widx)];
            w.t += 1;
            const env::Observation obs = env::observe(w.state, w.mission);
            hints::HintContext ctx{w.state, w.mission, w.history, encoding, w.episode_id, w.t};
            hints::HintResult hint_result;
            const hints::EnhancedObservation enh =
                hints::augment(obs, ctx, cfg.hints.k, provider, &hint_log, &hint_result);
            if (artifacts.llm_budget_exhausted_at < 0 && !hint_result.ok &&
                hint_result.error.find("request cap") != std::string::npos) {
                artifacts.llm_budget_exhausted_at = frames;
            }
            if (trace.is_open()) {
                trace << "{\"episode\":" << w.episode_id << ",\"t\":" << w.t
                      << ",\"hint_available\":" << enh.hint_available
                      << ",\"neutral\":" << (enh.hint.is_neutral() ? "true" : "false")
                      << ",\"hint_action\":" << enh.hint.action << "}\n";
            }
            pending.row(widx) = rl::featurize(enh, spec).transpose();
        }

        // Learner phase boundary: bootstrap with the pre-update network.
        if (buffer.full()) {
            const auto boot = net.forward(pending);
            buffer.finish(boot.values, cfg.ppo.gamma, cfg.ppo.lam);
            rl::ppo_update(net, adam, buffer, cfg.ppo, update_rng);
        }

        const auto fwd = net.forward(pending);
        for (int widx = 0; widx < n_workers; ++widx) {
            Worker& w = workers[static_cast<size_t>(widx)];
            rl::ActResult act = rl::sample_row(fwd.logits.row(widx), w.act_rng);
            act.value = fwd.values(widx);
            const env::Action action = static_cast<env::Action>(act.action);
            const env::StepResult sr = env::step(w.state, action, w.mission);
            w.history.push(w.t, action);
            buffer.add(widx, pending.row(widx).transpose(), act.action, act.log_prob, act.value,
                       sr.reward, sr.done);
            w.episode_return += sr.reward;
            frames += 1;
            if (sr.done) {
                episodes += 1;
                win_window.push_back(sr.reward > 0.0 ? 1 : 0);
                if (win_window.size() > 100) win_window.pop_front();
                return_window.push_back(w.episode_return);
                if (return_window.size() > 100) return_window.pop_front();
                reset_worker(widx);
            }
            if (frames >= next_emit) {
                artifacts.metrics.push_back({frames, win_rate(), mean_return(), episodes});
                metrics_out << artifacts.metrics.back().to_jsonl() << '\n';
                metrics_out.flush();
                next_emit += cfg.metrics_interval;
                if (cfg.early_stop_win_rate > 0.0 &&
                    artifacts.metrics.back().win_rate >= cfg.early_stop_win_rate) {
                    stop_early = true;
                }
            }
        }
    }

    if (artifacts.metrics.empty() || artifacts.metrics.back().frames != frames) {
        artifacts.metrics.push_back({frames, win_rate(), mean_return(), episodes});
        metrics_out << artifacts.metrics.back().to_jsonl() << '\n';
    }
    artifacts.frames = frames;
    artifacts.episodes = episodes;
    artifacts.final_win_rate = win_rate();

    hint_log.flush();
    metrics_out.close();

    nlohmann::json meta = {{"task", cfg.task}, {"seed", master_seed}, {"frames", frames}};
    rl::save_checkpoint(artifacts.checkpoint_path, net, spec, meta);

    if (cfg.eval_episodes > 0) {
        artifacts.eval_win_rate = evaluate_policy(cfg, net, provider, cfg.eval_episodes, master_seed);
    }

    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    nlohmann::json summary = {
        {"seed", master_seed},
        {"frames", frames},
        {"episodes", episodes},
        {"final_win_rate", artifacts.final_win_rate},
        {"eval_win_rate", artifacts.eval_win_rate},
        {"llm_budget_exhausted_at", artifacts.llm_budget_exhausted_at},
        {"wall_time_s", wall_s},
    };
    std::ofstream(run_dir / "summary.json") << summary.dump(2) << '\n';
    return artifacts;
}

std::vector<RunArtifacts> train(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    std::ofstream(fs::path(cfg.out_dir) / "config.json") << cfg.to_json().dump(2) << '\n';

    std::vector<RunArtifacts> runs;
    for (uint64_t seed : cfg.seeds) {
        const fs::path run_dir = fs::path(cfg.out_dir) / ("seed_" + std::to_string(seed));
        runs.push_back(train_single(cfg, seed, run_dir));
    }
    return runs;
}

}  // namespace hintrl::harness
