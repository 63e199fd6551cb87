#include "hintrl/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hintrl/util/error.hpp"
#include "hintrl/util/rng.hpp"

namespace hintrl::harness {

using nlohmann::json;
using util::ConfigError;

namespace {

constexpr const char* kProviderNames[] = {"none",  "neutral", "oracle", "antioracle",
                                          "noisy", "replay",  "llm"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
    if (!j.is_object()) throw ConfigError("config section must be an object: " + prefix);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError("unknown config key: " + (prefix.empty() ? key : prefix + "." + key));
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const char* provider_kind_name(ProviderKind k) { return kProviderNames[static_cast<int>(k)]; }

std::optional<ProviderKind> provider_kind_from_name(const std::string& name) {
    for (int i = 0; i < 7; ++i) {
        if (name == kProviderNames[i]) return static_cast<ProviderKind>(i);
    }
    return std::nullopt;
}

env::TaskKind ExperimentConfig::task_kind() const {
    auto t = env::task_kind_from_name(task);
    if (!t) throw ConfigError("task: unknown task '" + task + "'");
    return *t;
}

env::EnvConfig ExperimentConfig::env_config() const {
    env::EnvConfig cfg;
    cfg.room_size = room_size;
    cfg.max_steps = static_cast<int>(max_steps);
    cfg.opendoor_success_open = opendoor_success == "open";
    return cfg;
}

encode::EncodingKind ExperimentConfig::encoding_kind() const {
    auto e = encode::encoding_from_name(hints.encoding);
    if (!e) throw ConfigError("hints.encoding: unknown encoding '" + hints.encoding + "'");
    return *e;
}

ProviderKind ExperimentConfig::provider_kind() const {
    auto p = provider_kind_from_name(hints.provider);
    if (!p) throw ConfigError("hints.provider: unknown provider '" + hints.provider + "'");
    return *p;
}

void ExperimentConfig::validate() const {
    task_kind();
    encoding_kind();
    const ProviderKind provider = provider_kind();
    if (room_size < 4 || room_size > 32) throw ConfigError("room_size must be in [4, 32]");
    if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
    if (opendoor_success != "open" && opendoor_success != "reach") {
        throw ConfigError("opendoor_success must be 'open' or 'reach'");
    }
    if (frame_budget <= 0) throw ConfigError("frame_budget must be > 0");
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    if (eval_episodes < 0) throw ConfigError("eval_episodes must be >= 0");
    if (metrics_interval < 1) throw ConfigError("metrics_interval must be >= 1");
    if (early_stop_win_rate < 0.0 || early_stop_win_rate >= 1.0) {
        throw ConfigError("early_stop_win_rate must lie in [0, 1)");
    }
    if (hints.k < 1) throw ConfigError("hints.k must be >= 1");
    if (hints.p < 0) throw ConfigError("hints.p must be >= 0");
    if (hints.epsilon < 0.0 || hints.epsilon > 1.0) throw ConfigError("hints.epsilon must be in [0,1]");
    if (provider == ProviderKind::Replay && hints.replay_path.empty()) {
        throw ConfigError("hints.replay_path required for the replay provider");
    }
    if (provider == ProviderKind::Llm && llm.endpoint.empty()) {
        throw ConfigError("llm.endpoint required for the llm provider");
    }
    if (llm.timeout_s <= 0.0) throw ConfigError("llm.timeout_s must be > 0");
    if (llm.max_retries < 0) throw ConfigError("llm.max_retries must be >= 0");
    ppo.validate();
    // Seed isolation: explicit evaluation seeds may never overlap training seeds.
    for (uint64_t es : eval_seeds) {
        if (std::find(seeds.begin(), seeds.end(), es) != seeds.end()) {
            throw ConfigError("eval_seeds overlaps seeds (seed " + std::to_string(es) + ")");
        }
    }
}

json ExperimentConfig::to_json() const {
    return json{
        {"task", task},
        {"room_size", room_size},
        {"max_steps", max_steps},
        {"opendoor_success", opendoor_success},
        {"mission_text_features", mission_text_features},
        {"frame_budget", frame_budget},
        {"seeds", seeds},
        {"eval_seeds", eval_seeds},
        {"eval_episodes", eval_episodes},
        {"metrics_interval", metrics_interval},
        {"early_stop_win_rate", early_stop_win_rate},
        {"out_dir", out_dir},
        {"run_name", run_name},
        {"trace_schedule", trace_schedule},
        {"hints",
         {{"provider", hints.provider},
          {"k", hints.k},
          {"p", hints.p},
          {"epsilon", hints.epsilon},
          {"replay_path", hints.replay_path},
          {"encoding", hints.encoding}}},
        {"llm",
         {{"endpoint", llm.endpoint},
          {"model", llm.model},
          {"api_key_env", llm.api_key_env},
          {"temperature", llm.temperature},
          {"max_tokens", llm.max_tokens},
          {"timeout_s", llm.timeout_s},
          {"max_retries", llm.max_retries},
          {"backoff_base_s", llm.backoff_base_s},
          {"cache", llm.cache_enabled},
          {"cache_dir", llm.cache_dir},
          {"request_cap", llm.request_cap},
          {"retry_on_parse_failure", llm.retry_on_parse_failure},
          {"max_inflight", llm.max_inflight}}},
        {"ppo",
         {{"gamma", ppo.gamma},
          {"lam", ppo.lam},
          {"clip", ppo.clip},
          {"lr", ppo.lr},
          {"epochs", ppo.epochs},
          {"minibatch", ppo.minibatch},
          {"horizon", ppo.horizon},
          {"workers", ppo.workers},
          {"value_coef", ppo.value_coef},
          {"entropy_coef", ppo.entropy_coef},
          {"grad_clip", ppo.grad_clip},
          {"hidden", ppo.hidden}}},
    };
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    check_keys(j, {"task", "room_size", "max_steps", "opendoor_success", "mission_text_features",
                   "frame_budget", "seeds", "eval_seeds", "eval_episodes", "metrics_interval",
                   "early_stop_win_rate", "out_dir", "run_name", "trace_schedule", "hints", "llm",
                   "ppo"},
               "");
    ExperimentConfig cfg;
    read(j, "task", cfg.task);
    read(j, "room_size", cfg.room_size);
    read(j, "max_steps", cfg.max_steps);
    read(j, "opendoor_success", cfg.opendoor_success);
    read(j, "mission_text_features", cfg.mission_text_features);
    read(j, "frame_budget", cfg.frame_budget);
    read(j, "seeds", cfg.seeds);
    read(j, "eval_seeds", cfg.eval_seeds);
    read(j, "eval_episodes", cfg.eval_episodes);
    read(j, "metrics_interval", cfg.metrics_interval);
    read(j, "early_stop_win_rate", cfg.early_stop_win_rate);
    read(j, "out_dir", cfg.out_dir);
    read(j, "run_name", cfg.run_name);
    read(j, "trace_schedule", cfg.trace_schedule);

    if (j.contains("hints")) {
        const json& h = j.at("hints");
        check_keys(h, {"provider", "k", "p", "epsilon", "replay_path", "encoding"}, "hints");
        read(h, "provider", cfg.hints.provider);
        read(h, "k", cfg.hints.k);
        read(h, "p", cfg.hints.p);
        read(h, "epsilon", cfg.hints.epsilon);
        read(h, "replay_path", cfg.hints.replay_path);
        read(h, "encoding", cfg.hints.encoding);
    }
    if (j.contains("llm")) {
        const json& l = j.at("llm");
        check_keys(l,
                   {"endpoint", "model", "api_key_env", "temperature", "max_tokens", "timeout_s",
                    "max_retries", "backoff_base_s", "cache", "cache_dir", "request_cap",
                    "retry_on_parse_failure", "max_inflight"},
                   "llm");
        read(l, "endpoint", cfg.llm.endpoint);
        read(l, "model", cfg.llm.model);
        read(l, "api_key_env", cfg.llm.api_key_env);
        read(l, "temperature", cfg.llm.temperature);
        read(l, "max_tokens", cfg.llm.max_tokens);
        read(l, "timeout_s", cfg.llm.timeout_s);
        read(l, "max_retries", cfg.llm.max_retries);
        read(l, "backoff_base_s", cfg.llm.backoff_base_s);
        read(l, "cache", cfg.llm.cache_enabled);
        read(l, "cache_dir", cfg.llm.cache_dir);
        read(l, "request_cap", cfg.llm.request_cap);
        read(l, "retry_on_parse_failure", cfg.llm.retry_on_parse_failure);
        read(l, "max_inflight", cfg.llm.max_inflight);
    }
    if (j.contains("ppo")) {
        const json& p = j.at("ppo");
        check_keys(p,
                   {"gamma", "lam", "clip", "lr", "epochs", "minibatch", "horizon", "workers",
                    "value_coef", "entropy_coef", "grad_clip", "hidden"},
                   "ppo");
        read(p, "gamma", cfg.ppo.gamma);
        read(p, "lam", cfg.ppo.lam);
        read(p, "clip", cfg.ppo.clip);
        read(p, "lr", cfg.ppo.lr);
        read(p, "epochs", cfg.ppo.epochs);
        read(p, "minibatch", cfg.ppo.minibatch);
        read(p, "horizon", cfg.ppo.horizon);
        read(p, "workers", cfg.ppo.workers);
        read(p, "value_coef", cfg.ppo.value_coef);
        read(p, "entropy_coef", cfg.ppo.entropy_coef);
        read(p, "grad_clip", cfg.ppo.grad_clip);
        read(p, "hidden", cfg.ppo.hidden);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_with_overrides(json j,
                                                            const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        const size_t eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override must look like key.path=value: " + ov);
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);

        json* at = &j;
        size_t begin = 0;
        while (true) {
            const size_t dot = path.find('.', begin);
            const std::string part = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
            if (part.empty()) throw ConfigError("bad override path: " + path);
            if (dot == std::string::npos) {
                json parsed = json::parse(value, nullptr, false);
                (*at)[part] = parsed.is_discarded() ? json(value) : parsed;
                break;
            }
            at = &((*at)[part]);
            begin = dot + 1;
        }
    }
    return from_json(j);
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
    return from_json_with_overrides(std::move(j), overrides);
}

std::unique_ptr<hints::HintProvider> make_provider(const ExperimentConfig& cfg, uint64_t master_seed) {
    switch (cfg.provider_kind()) {
        case ProviderKind::None: return nullptr;
        case ProviderKind::Neutral: return std::make_unique<hints::NeutralProvider>();
        case ProviderKind::Oracle: return std::make_unique<hints::OracleProvider>();
        case ProviderKind::AntiOracle: return std::make_unique<hints::AntiOracleProvider>();
        case ProviderKind::Noisy:
            return std::make_unique<hints::NoisyProvider>(cfg.hints.epsilon,
                                                          util::mix(master_seed, 0x4e015e));
        case ProviderKind::Replay: return std::make_unique<hints::ReplayProvider>(cfg.hints.replay_path);
        case ProviderKind::Llm: return std::make_unique<llm::LlmHintProvider>(cfg.llm);
    }
    return nullptr;
}

}  // namespace hintrl::harness
