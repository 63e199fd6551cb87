#include "hintrl/llm/client.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace hintrl::llm {

namespace {

namespace fs = std::filesystem;

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
    const size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw LlmError(LlmErrorKind::Transport, "endpoint must start with http:// or https://: " + url);
    }
    const size_t path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    if (path_start == std::string::npos) {
        ep.base = url;
        ep.path = "/v1/chat/completions";
    } else {
        ep.base = url.substr(0, path_start);
        ep.path = url.substr(path_start);
    }
    return ep;
}

// 128-bit FNV-1a style digest, hex encoded; used for content-addressed cache
// file names.
std::string digest_hex(const std::string& data) {
    uint64_t h1 = 0xcbf29ce484222325ull;
    uint64_t h2 = 0x84222325cbf29ce4ull;
    for (unsigned char c : data) {
        h1 = (h1 ^ c) * 0x100000001b3ull;
        h2 = (h2 ^ (c + 0x9e)) * 0x100000001b3ull;
    }
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(h1),
                  static_cast<unsigned long long>(h2));
    return buf;
}

std::string format_temperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", t);
    return buf;
}

class InflightLimiter {
public:
    explicit InflightLimiter(int slots) : slots_(slots > 0 ? slots : 1) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    int slots_;
    std::mutex mutex_;
    std::condition_variable cv_;
};

}  // namespace

struct LlmClient::Impl {
    Endpoint endpoint;
    InflightLimiter limiter;
    mutable std::mutex stats_mutex;
    ClientStats stats;
    std::mutex cache_mutex;
    std::atomic<uint64_t> tmp_counter{0};

    explicit Impl(const LlmConfig& cfg) : endpoint{}, limiter(cfg.max_inflight) {
        if (!cfg.endpoint.empty()) endpoint = parse_endpoint(cfg.endpoint);
    }
};

LlmClient::LlmClient(LlmConfig config) : config_(std::move(config)), impl_(new Impl(config_)) {
    if (config_.cache_enabled && !config_.cache_dir.empty()) {
        std::error_code ec;
        fs::create_directories(config_.cache_dir, ec);
    }
}

LlmClient::~LlmClient() = default;

ClientStats LlmClient::stats() const {
    std::lock_guard<std::mutex> lock(impl_->stats_mutex);
    return impl_->stats;
}

std::string LlmClient::query(const Prompt& prompt, bool bypass_cache) {
    const std::string cache_key =
        digest_hex(config_.model + '\x1f' + format_temperature(config_.temperature) + '\x1f' +
                   prompt.system + '\x1f' + prompt.user);
    const fs::path cache_file = fs::path(config_.cache_dir) / (cache_key + ".json");

    const bool use_cache = config_.cache_enabled && !config_.cache_dir.empty();
    if (use_cache && !bypass_cache) {
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        std::ifstream in(cache_file);
        if (in) {
            nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (!j.is_discarded() && j.contains("response")) {
                {
                    std::lock_guard<std::mutex> slock(impl_->stats_mutex);
                    impl_->stats.cache_hits += 1;
                }
                return j["response"].get<std::string>();
            }
        }
    }

    if (config_.endpoint.empty()) {
        throw LlmError(LlmErrorKind::Transport, "no LLM endpoint configured");
    }
    {
        std::lock_guard<std::mutex> lock(impl_->stats_mutex);
        if (config_.request_cap > 0 && impl_->stats.logical_queries >= config_.request_cap) {
            throw LlmError(LlmErrorKind::BudgetExceeded,
                           "LLM request cap reached (" + std::to_string(config_.request_cap) + ")");
        }
        impl_->stats.logical_queries += 1;
    }

    nlohmann::json body = {
        {"model", config_.model},
        {"messages",
         {{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}}},
        {"temperature", config_.temperature},
        {"max_tokens", config_.max_tokens},
    };
    const std::string body_str = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && key[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    thread_local std::mt19937_64 jitter_rng{std::random_device{}()};
    std::string last_error;

    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::uniform_real_distribution<double> jitter(0.75, 1.25);
            const double delay_s =
                config_.backoff_base_s * static_cast<double>(1 << (attempt - 1)) * jitter(jitter_rng);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay_s));
            std::lock_guard<std::mutex> lock(impl_->stats_mutex);
            impl_->stats.retries += 1;
        }

        httplib::Client cli(impl_->endpoint.base);
        cli.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
        cli.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
        cli.set_write_timeout(std::chrono::duration<double>(config_.timeout_s));

        impl_->limiter.acquire();
        httplib::Result res = cli.Post(impl_->endpoint.path, headers, body_str, "application/json");
        impl_->limiter.release();
        {
            std::lock_guard<std::mutex> lock(impl_->stats_mutex);
            impl_->stats.http_posts += 1;
        }

        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;  // connection failures and timeouts are retryable
        }
        if (res->status == 401 || res->status == 403) {
            throw LlmError(LlmErrorKind::AuthFailed,
                           "authentication failed (HTTP " + std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw LlmError(LlmErrorKind::Transport, "HTTP " + std::to_string(res->status) + ": " + res->body);
        }

        nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
            !j["choices"][0].contains("message")) {
            throw LlmError(LlmErrorKind::Transport, "malformed chat-completion response body");
        }
        std::string content = j["choices"][0]["message"].value("content", std::string());

        if (use_cache) {
            nlohmann::json entry = {
                {"request",
                 {{"model", config_.model},
                  {"temperature", config_.temperature},
                  {"system", prompt.system},
                  {"user", prompt.user}}},
                {"response", content},
            };
            const fs::path tmp = cache_file.string() + ".tmp" +
                                 std::to_string(impl_->tmp_counter.fetch_add(1));
            std::lock_guard<std::mutex> lock(impl_->cache_mutex);
            std::ofstream out(tmp);
            out << entry.dump(2);
            out.close();
            std::error_code ec;
            fs::rename(tmp, cache_file, ec);  // atomic publish
        }
        return content;
    }
    throw LlmError(LlmErrorKind::Transport,
                   "request failed after " + std::to_string(config_.max_retries) + " retries: " + last_error);
}

LlmHintProvider::LlmHintProvider(LlmConfig config) : client_(new LlmClient(std::move(config))) {}

hints::HintResult LlmHintProvider::get_hint(const hints::HintContext& ctx) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    hints::HintResult result;

    try {
        const encode::EncodedState encoded = encode::encode(ctx.encoding, ctx.state, ctx.mission);
        const Prompt prompt = build_prompt(encoded, ctx.history, ctx.mission);
        std::string raw = client_->query(prompt);

        std::string parse_error;
        std::optional<Prediction> pred = parse_prediction(raw, &parse_error);
        if (!pred && client_->config().retry_on_parse_failure) {
            raw = client_->query(prompt, /*bypass_cache=*/true);
            pred = parse_prediction(raw, &parse_error);
        }
        if (pred) {
            result.hint.action = pred->primitive_action;
            result.hint.subgoal = pred->subgoal;
            result.hint.reasoning = pred->reasoning;
        } else {
            result.ok = false;
            result.error = "parse failure: " + parse_error;
        }
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
        result.hint = hints::Hint::neutral();
    }

    result.latency_ms =
        std::chrono::duration<double, std::milli>(clock::now() - started).count();
    return result;
}

}  // namespace hintrl::llm
