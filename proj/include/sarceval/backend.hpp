#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sarceval/label.hpp"

namespace sarceval {

enum class Role { System, User, Assistant };

std::string_view to_string(Role r) noexcept;
std::optional<Role> role_from_string(std::string_view s) noexcept;

struct ChatMessage {
    Role role = Role::User;
    std::string content;
    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline constexpr int kDefaultMaxTokens = 8;

struct ChatRequest {
    std::string model_id;
    double temperature = 0.7;
    int max_tokens = kDefaultMaxTokens;
    std::vector<ChatMessage> messages;

    /// Zero-shot request: the prompt as a single user message.
    static ChatRequest single_user(std::string model_id, double temperature, int max_tokens, std::string prompt);

    /// Throws DataError: empty messages, temperature outside [0, 2], max_tokens < 1.
    void validate() const;
    /// Content of the (first) user message; empty if there is none.
    std::string_view user_content() const noexcept;

    friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

struct ChatResponse {
    std::string content;
    std::string finish_reason;
    std::uint64_t latency_ms = 0;
    int attempt_count = 1;

    friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

struct ChatExchange {
    ChatRequest request;
    ChatResponse response;
    bool cache_hit = false;
    std::string request_digest;
};

/// Canonical JSON body fields (`model`, `messages`, `temperature`, `max_tokens`).
nlohmann::ordered_json to_json(const ChatRequest& req);
ChatRequest request_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ChatResponse& resp);
ChatResponse response_from_json(const nlohmann::json& j);

/// Hex SHA-256 of the canonical request JSON. Depends only on model_id,
/// temperature, max_tokens and messages.
std::string request_digest(const ChatRequest& req);

/// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view data);

// ---------------------------------------------------------------------------

class BackendError : public Error {
public:
    enum class Kind { Authentication, Transient, Protocol, Configuration };

    BackendError(Kind kind, int attempt_count, const std::string& what)
        : Error(what), kind_(kind), attempt_count_(attempt_count) {}

    Kind kind() const noexcept { return kind_; }
    int attempt_count() const noexcept { return attempt_count_; }

private:
    Kind kind_;
    int attempt_count_;
};

/// A chat-completion provider. Implementations are safe to call concurrently.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
    virtual std::string name() const = 0;
    /// Number of complete() calls that reached the provider.
    virtual std::uint64_t call_count() const noexcept = 0;
};

// ---------------------------------------------------------------------------
// Offline stand-in.

struct MockOptions {
    std::uint64_t seed = 0;
    /// Probability (via a seeded text hash) that a rule-3 decoration is emitted.
    double noise_rate = 0.0;
    /// Lowercase tokens that make a text Sarcastic under rule 2.
    std::vector<std::string> lexicon = default_lexicon();

    static std::vector<std::string> default_lexicon();
};

/// Deterministic rule table over the user-message content, first match wins:
///   1. contains `??`, `...` or `!!`          -> "Sarcastic"
///   2. has a token from the lexicon           -> "Sarcastic"
///   3. hash(seed, content) < noise_rate       -> a decorated output
///   4. otherwise                              -> "Non-sarcastic"
/// Ignores model_id, temperature and max_tokens.
ChatResponse mock_complete(const ChatRequest& req, const MockOptions& opts);

/// Decorations used by rule 3. `{}` stands for the label; entries without it
/// are deliberately unparseable.
const std::vector<std::string_view>& mock_decorations();

/// Uniform [0, 1) value derived from (seed, text); stable across processes.
double mock_noise_draw(std::string_view text, std::uint64_t seed) noexcept;

class MockBackend final : public ChatBackend {
public:
    explicit MockBackend(MockOptions opts = {}) : opts_(std::move(opts)) {}

    ChatResponse complete(const ChatRequest& req) override;
    std::string name() const override { return "mock"; }
    std::uint64_t call_count() const noexcept override { return calls_.load(); }
    const MockOptions& options() const noexcept { return opts_; }

private:
    MockOptions opts_;
    std::atomic<std::uint64_t> calls_{0};
};

// ---------------------------------------------------------------------------
// OpenAI-compatible HTTP client.

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds backoff_base{1000};
    double backoff_factor = 2.0;
};

struct RemoteOptions {
    /// Full URL of the chat-completions endpoint.
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string api_key;
    RetryPolicy retry;
    std::chrono::milliseconds timeout{60000};
    /// Bound on concurrent in-flight HTTP requests.
    int max_in_flight = 4;
    /// Requests per second; <= 0 disables rate limiting.
    double rate_limit = 0.0;
    std::uint64_t jitter_seed = 0;
};

/// Token bucket with capacity max(1, rate); blocks until a token is available.
class RateLimiter {
public:
    explicit RateLimiter(double per_second);
    void acquire();

private:
    double rate_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
    std::mutex mu_;
};

class RemoteBackend final : public ChatBackend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    /// Throws BackendError(Configuration) if the API key is empty or the URL is malformed.
    explicit RemoteBackend(RemoteOptions opts, Sleeper sleeper = {});
    ~RemoteBackend() override;

    /// 401/403 fail immediately. 429, 5xx and transport failures are retried
    /// with full-jitter exponential backoff. Other responses that are not a
    /// well-formed completion are terminal protocol errors.
    ChatResponse complete(const ChatRequest& req) override;
    std::string name() const override { return "remote"; }
    std::uint64_t call_count() const noexcept override { return calls_.load(); }

    /// Upper bound of the backoff window before attempt `attempt + 1`.
    static std::chrono::milliseconds backoff_ceiling(const RetryPolicy& p, int attempt);

private:
    struct Endpoint;
    RemoteOptions opts_;
    std::unique_ptr<Endpoint> endpoint_;
    Sleeper sleeper_;
    std::counting_semaphore<> in_flight_;
    RateLimiter limiter_;
    std::atomic<std::uint64_t> calls_{0};
    std::mutex rng_mu_;
    std::uint64_t rng_state_;
};

// ---------------------------------------------------------------------------
// Replay cache: one JSON file per request digest.

class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    /// Corrupt or unreadable entries are reported as a miss and recorded in warnings().
    std::optional<ChatResponse> lookup(const std::string& digest);
    /// Atomic write-temp-then-rename; concurrent writers of one digest are idempotent.
    void store(const std::string& digest, const ChatRequest& req, const ChatResponse& resp);

    std::filesystem::path entry_path(const std::string& digest) const;
    std::size_t entry_count() const;
    std::vector<std::string> warnings() const;
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::vector<std::string> warnings_;
};

/// Serves from cache on a digest hit; otherwise calls the backend and persists the response.
ChatExchange cached_complete(ResponseCache& cache, ChatBackend& backend, const ChatRequest& req);

}  // namespace sarceval
