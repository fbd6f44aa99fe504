// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steerbench::llm
{

enum class Role
{
    User,
    Assistant,
    Tool,
};

std::string_view role_name(Role role) noexcept;
std::optional<Role> parse_role(std::string_view name);

struct Message
{
    Role role = Role::User;
    std::string content;
    friend bool operator==(const Message&, const Message&) = default;
};

struct ChatRequest
{
    std::string model_id;
    std::string system_prompt;
    std::vector<Message> messages;
    double temperature = 0.0;
    int max_output_tokens = 4096;
};

struct ChatResponse
{
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::int64_t latency_ms = 0;
    friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

nlohmann::json to_json(const ChatRequest& request);
ChatRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChatResponse& response);
ChatResponse response_from_json(const nlohmann::json& j);

/// Hex SHA-256 of the canonical JSON of {model_id, system_prompt, messages, temperature}.
std::string request_hash(const ChatRequest& request);
std::string sha256_hex(std::string_view data);

class GatewayError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidRequest: public GatewayError
{
public:
    using GatewayError::GatewayError;
};

class MissingCredentials: public GatewayError
{
public:
    using GatewayError::GatewayError;
};

class RateLimited: public GatewayError
{
public:
    using GatewayError::GatewayError;
};

class ProviderError: public GatewayError
{
public:
    ProviderError(int status, std::string body);
    int status() const noexcept { return _status; }
    const std::string& body() const noexcept { return _body; }

private:
    int _status;
    std::string _body;
};

class ReplayMiss: public GatewayError
{
public:
    explicit ReplayMiss(std::string hash);
    const std::string& hash() const noexcept { return _hash; }

private:
    std::string _hash;
};

/// Nonempty; starts with a user turn; no two consecutive turns share a role; tool results
/// follow an assistant turn; the last turn is not the assistant's.
void validate(const ChatRequest& request);

struct Cost
{
    std::int64_t total_tokens = 0;
    std::int64_t total_latency_ms = 0;
};

Cost accumulate_cost(const std::vector<ChatResponse>& responses);

struct ModelCapabilities
{
    bool system_prompt = true;
};

/// o1-family models reject custom system prompts; everything else accepts them.
ModelCapabilities default_capabilities(std::string_view model_id);

/// Line-delimited JSON objects, each carrying a "hash" key. Safe for concurrent use.
class ReplayStore
{
public:
    explicit ReplayStore(std::filesystem::path path);

    /// The most recent entry recorded under hash.
    std::optional<nlohmann::json> find(const std::string& hash) const;
    void append(const nlohmann::json& entry);
    std::size_t size() const;
    const std::filesystem::path& path() const noexcept { return _path; }

private:
    std::filesystem::path _path;
    mutable std::mutex _mutex;
    std::map<std::string, nlohmann::json> _entries;
    std::size_t _lines = 0;
};

/// One provider round trip. Throws ProviderError; HTTP 429 surfaces as ProviderError with status 429.
class Provider
{
public:
    virtual ~Provider() = default;
    virtual ChatResponse send(const ChatRequest& request) = 0;
};

struct ProviderConfig
{
    std::string name = "openai";
    std::string base_url = "https://api.openai.com";
    std::string api_key;
    std::chrono::seconds timeout { 300 };
};

/// Reads STEERBENCH_API_KEY_<NAME>, the provider name upper-cased with non-alphanumerics as '_'.
std::string api_key_from_env(std::string_view provider_name);

/// POST {base_url}/v1/chat/completions in the OpenAI wire format.
class OpenAICompatibleProvider: public Provider
{
public:
    explicit OpenAICompatibleProvider(ProviderConfig config);
    ChatResponse send(const ChatRequest& request) override;

private:
    ProviderConfig _config;
    std::string _origin;
    std::string _path;
};

class TokenBucket
{
public:
    TokenBucket(double per_second, double burst);
    void acquire();

private:
    std::mutex _mutex;
    double _rate;
    double _burst;
    double _tokens;
    std::chrono::steady_clock::time_point _last;
};

struct RetryPolicy
{
    int attempts = 3;
    std::chrono::milliseconds initial_backoff { 2000 };
    double multiplier = 2.0;
};

enum class SessionMode
{
    Live,
    Record,
    Replay,
};

std::string_view mode_name(SessionMode mode) noexcept;
std::optional<SessionMode> parse_mode(std::string_view name);

struct GatewayOptions
{
    SessionMode mode = SessionMode::Replay;
    RetryPolicy retry;
    // Record mode answers repeated requests from the store instead of calling the provider again.
    bool dedup = true;
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Lets concurrent callers with the same key share one computation.
template<class T>
class SingleFlight
{
public:
    /// Returns the cached value if lookup finds one, else joins or starts the computation for key.
    template<class Lookup, class Compute>
    T run(const std::string& key, Lookup lookup, Compute compute)
    {
        std::promise<T> promise;
        std::shared_future<T> future;
        {
            std::lock_guard lock(_mutex);
            if (std::optional<T> hit = lookup())
                return *hit;
            auto it = _pending.find(key);
            if (it != _pending.end())
                future = it->second;
            else
                _pending[key] = promise.get_future().share();
        }
        if (future.valid())
            return future.get();
        try
        {
            promise.set_value(compute());
        }
        catch (...)
        {
            promise.set_exception(std::current_exception());
        }
        std::shared_future<T> mine;
        {
            std::lock_guard lock(_mutex);
            mine = _pending[key];
            _pending.erase(key);
        }
        return mine.get();
    }

private:
    std::mutex _mutex;
    std::map<std::string, std::shared_future<T>> _pending;
};

class Gateway
{
public:
    /// provider may be null in Replay mode; store may be null in Live mode.
    Gateway(GatewayOptions options, std::shared_ptr<Provider> provider, std::shared_ptr<ReplayStore> store,
            std::shared_ptr<TokenBucket> limiter = nullptr);

    ChatResponse complete(const ChatRequest& request);
    SessionMode mode() const noexcept { return _options.mode; }

private:
    ChatResponse call_provider(const ChatRequest& request);

    GatewayOptions _options;
    std::shared_ptr<Provider> _provider;
    std::shared_ptr<ReplayStore> _store;
    std::shared_ptr<TokenBucket> _limiter;
    SingleFlight<ChatResponse> _flights;
};

} // namespace steerbench::llm
