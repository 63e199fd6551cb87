#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "hintrl/encode/encoders.hpp"
#include "hintrl/hints/provider.hpp"
#include "hintrl/hints/types.hpp"

namespace hintrl::llm {

struct LlmConfig {
    std::string endpoint;  // e.g. "http://127.0.0.1:8000/v1/chat/completions"
    std::string model = "llama3-70b";
    std::string api_key_env = "HINTRL_API_KEY";
    double temperature = 0.0;
    int max_tokens = 512;
    double timeout_s = 30.0;
    int max_retries = 3;
    double backoff_base_s = 0.5;
    bool cache_enabled = true;
    std::string cache_dir = "llm_cache";
    long request_cap = 0;  // 0 = unlimited logical network queries
    bool retry_on_parse_failure = false;
    int max_inflight = 4;
};

struct Prompt {
    std::string system;
    std::string user;
};

// System and user messages for the hint query: action and subgoal catalogs,
// the required Prediction(...) output shape, the encoded state, the
// step-indexed action history and the mission.
Prompt build_prompt(const encode::EncodedState& encoded, const hints::ActionHistory& history,
                    const env::Mission& mission);

enum class LlmErrorKind { Transport, AuthFailed, BudgetExceeded };

struct LlmError : std::runtime_error {
    LlmErrorKind kind;
    LlmError(LlmErrorKind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

struct Prediction {
    std::string reasoning;
    int primitive_action = 0;  // 0..6
    hints::Subgoal subgoal = hints::Subgoal::None;
};

// Tolerant extraction of the last Prediction(...) block: fields by name in
// any order, quoted or unquoted subgoal names, action must be an integer in
// 0..6. Total over arbitrary bytes; failures land in *error.
std::optional<Prediction> parse_prediction(const std::string& raw, std::string* error = nullptr);

struct ClientStats {
    long logical_queries = 0;  // cache misses that hit the network
    long http_posts = 0;       // every POST, retries included
    long cache_hits = 0;
    long retries = 0;
};

class LlmClient {
public:
    explicit LlmClient(LlmConfig config);
    ~LlmClient();

    // Assistant message content. Throws LlmError. `bypass_cache` forces a
    // fresh network call (the response still gets cached).
    std::string query(const Prompt& prompt, bool bypass_cache = false);

    ClientStats stats() const;
    const LlmConfig& config() const { return config_; }

private:
    struct Impl;
    LlmConfig config_;
    std::unique_ptr<Impl> impl_;
};

// HintProvider backed by the chat-completion client: encode -> prompt ->
// query -> parse. Any failure degrades to the neutral hint.
class LlmHintProvider final : public hints::HintProvider {
public:
    explicit LlmHintProvider(LlmConfig config);
    std::string name() const override { return "llm"; }
    hints::HintResult get_hint(const hints::HintContext& ctx) override;

    LlmClient& client() { return *client_; }

private:
    std::unique_ptr<LlmClient> client_;
};

}  // namespace hintrl::llm
