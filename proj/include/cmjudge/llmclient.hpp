#pragma once

#include <memory>
#include <optional>
#include <string>

namespace cmjudge::llm {

// One chat-completion request. repetition_tag distinguishes deliberate
// repeats of otherwise identical requests so the cache keeps every sample.
struct ChatRequest {
    std::string model;
    std::string system_text;
    std::string user_text;
    double temperature = 0.0; // [0, 1]
    double top_p = 0.5;       // (0, 1]
    int max_tokens = 1024;
    int repetition_tag = 0;

    void validate() const;
};

enum class FinishReason { stop, length, error };

std::string to_string(FinishReason r);
FinishReason finish_reason_from_string(const std::string &s);

struct TokenUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::stop;
    TokenUsage usage;
};

// SHA-256 over the canonical serialization of (model, system_text,
// user_text, temperature, top_p, max_tokens, repetition_tag); stable across
// runs and platforms.
std::string cache_key(const ChatRequest &req);

class ChatClient {
  public:
    virtual ~ChatClient() = default;
    virtual ChatResponse complete(const ChatRequest &req) = 0;
};

struct ClientOptions {
    std::string base_url;             // e.g. https://api.example.com/v1
    std::string api_key;
    std::string cache_dir;            // empty disables caching
    int max_attempts = 3;             // retries on timeouts, 429 and 5xx
    int max_in_flight = 8;
    int timeout_seconds = 120;
    double initial_backoff_seconds = 0.5;
    bool offline = false;             // serve from cache only, never dial out

    // Fills base_url / api_key / cache_dir from CJ_API_BASE, CJ_API_KEY and
    // CJ_CACHE_DIR where unset.
    static ClientOptions from_env(ClientOptions base = {});
};

// Rate-limited, caching client for a chat-completions-compatible endpoint.
// Safe to share across threads; concurrent requests are bounded by
// max_in_flight.
std::unique_ptr<ChatClient> make_http_client(ClientOptions options);

} // namespace cmjudge::llm
