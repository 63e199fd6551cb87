#include "hintrl/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hintrl/cli/plot.hpp"
#include "hintrl/encode/encoders.hpp"
#include "hintrl/harness/eval.hpp"
#include "hintrl/harness/grid.hpp"
#include "hintrl/harness/train.hpp"
#include "hintrl/hints/augment.hpp"
#include "hintrl/plan/planner.hpp"
#include "hintrl/rl/checkpoint.hpp"
#include "hintrl/rl/feature.hpp"
#include "hintrl/util/error.hpp"

namespace hintrl::cli {

namespace fs = std::filesystem;
using harness::ExperimentConfig;

namespace {

struct TrainArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

struct GridArgs {
    std::string config_path;
};

struct EvalHintsArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string provider;
    int samples = 30;
    uint64_t seed = 12345;
    std::string out_path;
};

struct RolloutArgs {
    std::string task = "gotoobj";
    uint64_t seed = 1;
    std::string policy = "oracle";
    std::string checkpoint;
    std::string provider = "oracle";
    std::string encoding = "ascii_grid";
    int k = 5;
    int p = 5;
    int room_size = 8;
    int max_steps = 0;
    std::string opendoor_success = "open";
    std::string record_path;
    bool quiet = false;
};

struct PlotArgs {
    std::vector<std::string> files;
    std::vector<std::string> names;
    std::string out_path = "curves.svg";
    long budget = 0;
};

int cmd_train(const TrainArgs& args) {
    ExperimentConfig cfg = ExperimentConfig::load(args.config_path, args.overrides);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    const auto runs = harness::train(cfg);
    for (size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        std::cout << "seed " << cfg.seeds[i] << ": frames=" << run.frames
                  << " episodes=" << run.episodes << " final_win_rate=" << run.final_win_rate;
        if (run.eval_win_rate >= 0.0) std::cout << " eval_win_rate=" << run.eval_win_rate;
        if (run.llm_budget_exhausted_at >= 0) {
            std::cout << " (hints fell back to neutral at frame " << run.llm_budget_exhausted_at << ")";
        }
        std::cout << "\n  artifacts: " << run.dir.string() << "\n";
    }
    return 0;
}

int cmd_grid(const GridArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw util::ConfigError("cannot open grid spec: " + args.config_path);
    nlohmann::json spec = nlohmann::json::parse(in, nullptr, false);
    if (spec.is_discarded()) throw util::ConfigError("grid spec is not valid JSON: " + args.config_path);
    const harness::GridResult result = harness::run_grid_spec(spec);
    std::cout << result.table;
    bool any_failed = false;
    for (const auto& row : result.rows) any_failed |= !row.ok;
    return any_failed ? 1 : 0;
}

int cmd_eval_hints(const EvalHintsArgs& args) {
    ExperimentConfig cfg = ExperimentConfig::load(args.config_path, args.overrides);
    if (!args.provider.empty()) cfg.hints.provider = args.provider;
    cfg.validate();
    auto provider = harness::make_provider(cfg, args.seed);
    if (provider == nullptr) throw util::ConfigError("eval-hints needs a provider (got 'none')");

    std::string out_path = args.out_path;
    if (out_path.empty()) {
        fs::create_directories(cfg.out_dir);
        out_path = (fs::path(cfg.out_dir) / "quality.jsonl").string();
    }
    auto [records, summary] =
        harness::evaluate_hint_quality(*provider, cfg, args.samples, args.seed, out_path);

    int failures = 0;
    for (const auto& r : records) failures += r.error.empty() ? 0 : 1;
    std::cout << "provider=" << provider->name() << " samples=" << summary.samples
              << " optimal_match_rate=" << summary.match_rate << " (" << summary.matches << "/"
              << summary.samples << ", " << failures << " provider failures)\n"
              << "records: " << out_path << "\n";
    return 0;
}

int cmd_rollout(const RolloutArgs& args) {
    auto task = env::task_kind_from_name(args.task);
    if (!task) throw util::ConfigError("unknown task: " + args.task);
    auto encoding = encode::encoding_from_name(args.encoding);
    if (!encoding) throw util::ConfigError("unknown encoding: " + args.encoding);
    if (args.policy != "oracle" && args.policy != "random" && args.policy != "checkpoint") {
        throw util::ConfigError("policy must be oracle, random or checkpoint");
    }
    if (args.policy == "checkpoint" && args.checkpoint.empty()) {
        throw util::ConfigError("--checkpoint required for policy=checkpoint");
    }

    env::EnvConfig env_cfg;
    env_cfg.room_size = args.room_size;
    env_cfg.max_steps = args.max_steps;
    env_cfg.opendoor_success_open = args.opendoor_success == "open";

    std::optional<rl::PolicyNet> net;
    rl::FeatureSpec spec;
    if (args.policy == "checkpoint") {
        const rl::Checkpoint ckpt = rl::load_checkpoint(args.checkpoint);
        spec = ckpt.feature_spec;
        net.emplace(rl::restore_net(ckpt, spec.dim()));
    }

    std::unique_ptr<hints::HintProvider> provider;
    if (args.provider != "none") {
        ExperimentConfig pcfg;
        pcfg.hints.provider = args.provider;
        pcfg.hints.epsilon = 1.0;
        provider = harness::make_provider(pcfg, args.seed);
    }

    std::ofstream record;
    if (!args.record_path.empty()) {
        record.open(args.record_path);
        if (!record) throw util::ConfigError("cannot write record file: " + args.record_path);
    }

    auto [state, mission] = env::reset(*task, args.seed, env_cfg);
    if (record.is_open()) {
        nlohmann::json snap = env::snapshot_to_json(state, mission);
        snap["type"] = "snapshot";
        record << snap.dump() << '\n';
    }
    std::cout << "task: " << args.task << "  seed: " << args.seed << "\nmission: " << mission.text
              << "\n\n";

    hints::ActionHistory history(args.p);
    util::Rng rng(util::mix(args.seed, 0xf011));
    int t = 0;
    double total_return = 0.0;
    bool success = false;

    while (true) {
        t += 1;
        const env::Observation obs = env::observe(state, mission);
        hints::HintContext ctx{state, mission, history, *encoding, 0, t};
        const hints::EnhancedObservation enh = hints::augment(obs, ctx, args.k, provider.get());

        int action_code;
        if (args.policy == "oracle") {
            action_code = static_cast<int>(plan::optimal_action(state, mission));
        } else if (args.policy == "random") {
            action_code = rng.below(env::kNumActions);
        } else {
            action_code = rl::act_greedy(*net, rl::featurize(enh, spec));
        }
        const env::Action action = static_cast<env::Action>(action_code);
        const env::StepResult sr = env::step(state, action, mission);
        history.push(t, action);
        total_return += sr.reward;

        if (!args.quiet) {
            std::cout << "--- step " << t << " ---\n" << encode::encode_ascii(state, mission).text << "\n";
            if (enh.hint_available) {
                std::cout << "hint: action=" << enh.hint.action << " ("
                          << env::action_name(env::action_from_code(enh.hint.action))
                          << "), subgoal=" << hints::subgoal_name(enh.hint.subgoal) << "\n";
            } else {
                std::cout << "hint: (none)\n";
            }
            std::cout << "action: " << action_code << " (" << env::action_name(action)
                      << ")  reward: " << sr.reward << "\n\n";
        }
        if (record.is_open()) {
            nlohmann::json step_rec = {
                {"type", "step"},           {"t", t},
                {"action", action_code},    {"action_name", env::action_name(action)},
                {"reward", sr.reward},      {"hint_action", enh.hint.action},
                {"hint_subgoal", hints::subgoal_name(enh.hint.subgoal)},
                {"hint_available", enh.hint_available},
            };
            record << step_rec.dump() << '\n';
        }
        if (sr.done) {
            success = sr.reward > 0.0;
            break;
        }
    }

    if (record.is_open()) {
        nlohmann::json result = {
            {"type", "result"}, {"success", success}, {"steps", t}, {"return", total_return}};
        record << result.dump() << '\n';
    }
    if (success) {
        std::cout << "SUCCESS in " << t << " steps, return " << total_return << "\n";
    } else {
        std::cout << "TIMEOUT after " << t << " steps\n";
    }
    return 0;
}

int cmd_plot(const PlotArgs& args) {
    std::vector<std::string> names = args.names;
    if (names.empty()) {
        for (const std::string& file : args.files) {
            const fs::path p(file);
            const std::string parent = p.parent_path().filename().string();
            names.push_back(parent.empty() ? p.stem().string() : parent);
        }
    }
    const PlotResult result = render_learning_curves(args.files, names, args.budget);
    std::ofstream out(args.out_path);
    if (!out) throw util::ConfigError("cannot write SVG: " + args.out_path);
    out << result.svg;
    std::cout << "wrote " << args.out_path << " (" << result.series << " series, "
              << result.skipped_lines << " malformed lines skipped)\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"LLM-guided gridworld RL: training, experiment grids and evaluation"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Run Algorithm-1 training for every seed");
    train->add_option("--config", train_args.config_path, "experiment config JSON")->required();
    train->add_option("--set", train_args.overrides, "dot-path override, e.g. hints.provider=oracle");
    train->add_option("--out", train_args.out_dir, "output directory (overrides out_dir)");

    GridArgs grid_args;
    CLI::App* grid = app.add_subcommand("grid", "Run an experiment grid from a spec file");
    grid->add_option("--config", grid_args.config_path, "grid spec JSON (base + conditions)")
        ->required();

    EvalHintsArgs eval_args;
    CLI::App* eval_hints = app.add_subcommand("eval-hints", "Hint-quality evaluation vs the planner");
    eval_hints->add_option("--config", eval_args.config_path, "experiment config JSON")->required();
    eval_hints->add_option("--set", eval_args.overrides, "dot-path override");
    eval_hints->add_option("--provider", eval_args.provider, "provider override");
    eval_hints->add_option("--samples", eval_args.samples, "number of sampled states");
    eval_hints->add_option("--seed", eval_args.seed, "sampling seed");
    eval_hints->add_option("--out", eval_args.out_path, "quality records output path");

    RolloutArgs rollout_args;
    CLI::App* rollout = app.add_subcommand("rollout", "Render one episode to the terminal");
    rollout->add_option("--task", rollout_args.task, "gotoobj | opendoor | pickuploc");
    rollout->add_option("--seed", rollout_args.seed, "episode seed");
    rollout->add_option("--policy", rollout_args.policy, "oracle | random | checkpoint");
    rollout->add_option("--checkpoint", rollout_args.checkpoint, "checkpoint file");
    rollout->add_option("--provider", rollout_args.provider, "hint provider to annotate with");
    rollout->add_option("--encoding", rollout_args.encoding, "state encoding for hints");
    rollout->add_option("--k", rollout_args.k, "hint frequency");
    rollout->add_option("--p", rollout_args.p, "action history size");
    rollout->add_option("--room-size", rollout_args.room_size, "grid side incl. walls");
    rollout->add_option("--max-steps", rollout_args.max_steps, "step limit (0 = 8*room_size)");
    rollout->add_option("--opendoor-success", rollout_args.opendoor_success, "open | reach");
    rollout->add_option("--record", rollout_args.record_path, "write a replayable step log");
    rollout->add_flag("--quiet", rollout_args.quiet, "suppress per-step frames");

    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "Render learning curves to SVG");
    plot->add_option("files", plot_args.files, "metrics.jsonl files")->required();
    plot->add_option("-o,--out", plot_args.out_path, "output SVG path");
    plot->add_option("--budget", plot_args.budget, "x-axis frame budget (0 = from data)");
    plot->add_option("--name", plot_args.names, "legend name per file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train->parsed()) return cmd_train(train_args);
        if (grid->parsed()) return cmd_grid(grid_args);
        if (eval_hints->parsed()) return cmd_eval_hints(eval_args);
        if (rollout->parsed()) return cmd_rollout(rollout_args);
        if (plot->parsed()) return cmd_plot(plot_args);
    } catch (const util::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const util::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace hintrl::cli
