// SPDX-License-Identifier: Apache-2.0
#include <httplib.h>

#include <steerbench/llm/gateway.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <thread>

namespace steerbench::llm
{

OpenAICompatibleProvider::OpenAICompatibleProvider(ProviderConfig config): _config(std::move(config))
{
    auto scheme = _config.base_url.find("://");
    if (scheme == std::string::npos)
        throw GatewayError("base_url must include a scheme: " + _config.base_url);
    auto slash = _config.base_url.find('/', scheme + 3);
    _origin = _config.base_url.substr(0, slash);
    _path = slash == std::string::npos ? "" : _config.base_url.substr(slash);
    while (!_path.empty() && _path.back() == '/')
        _path.pop_back();
    _path += "/v1/chat/completions";
}

ChatResponse OpenAICompatibleProvider::send(const ChatRequest& request)
{
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_prompt.empty())
        messages.push_back({ { "role", "system" }, { "content", request.system_prompt } });
    for (const auto& m: request.messages)
    {
        // Tool output goes out as a plain user turn.
        std::string_view role = m.role == Role::Tool ? "user" : role_name(m.role);
        messages.push_back({ { "role", role }, { "content", m.content } });
    }
    nlohmann::json body = {
        { "model", request.model_id },
        { "messages", messages },
        { "temperature", request.temperature },
        { "max_tokens", request.max_output_tokens },
    };

    httplib::Client client(_origin);
    client.set_connection_timeout(std::chrono::seconds(30));
    client.set_read_timeout(_config.timeout);
    client.set_write_timeout(std::chrono::seconds(60));
    httplib::Headers headers;
    if (!_config.api_key.empty())
        headers.emplace("Authorization", "Bearer " + _config.api_key);

    auto start = std::chrono::steady_clock::now();
    auto result = client.Post(_path, headers, body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace),
                              "application/json");
    auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (!result)
        throw ProviderError(0, "transport error: " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
        throw ProviderError(result->status, result->body);

    try
    {
        auto j = nlohmann::json::parse(result->body);
        const auto& message = j.at("choices").at(0).at("message");
        ChatResponse r;
        r.text = message.at("content").is_null() ? "" : message.at("content").get<std::string>();
        if (j.contains("usage") && j["usage"].is_object())
        {
            r.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t { 0 });
            r.completion_tokens = j["usage"].value("completion_tokens", std::int64_t { 0 });
        }
        r.latency_ms = latency.count();
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ProviderError(result->status, fmt::format("unreadable completion ({}): {}", e.what(), result->body));
    }
}

TokenBucket::TokenBucket(double per_second, double burst):
    _rate(per_second), _burst(std::max(1.0, burst)), _tokens(_burst), _last(std::chrono::steady_clock::now())
{
    if (per_second <= 0)
        throw GatewayError("rate limit must be positive");
}

void TokenBucket::acquire()
{
    std::unique_lock lock(_mutex);
    while (true)
    {
        auto now = std::chrono::steady_clock::now();
        _tokens = std::min(_burst, _tokens + std::chrono::duration<double>(now - _last).count() * _rate);
        _last = now;
        if (_tokens >= 1.0)
        {
            _tokens -= 1.0;
            return;
        }
        std::this_thread::sleep_for(std::chrono::duration<double>((1.0 - _tokens) / _rate));
    }
}

Gateway::Gateway(GatewayOptions options, std::shared_ptr<Provider> provider, std::shared_ptr<ReplayStore> store,
                 std::shared_ptr<TokenBucket> limiter):
    _options(std::move(options)), _provider(std::move(provider)), _store(std::move(store)),
    _limiter(std::move(limiter))
{
    if (_options.mode != SessionMode::Replay && !_provider)
        throw GatewayError(fmt::format("{} mode needs a provider", mode_name(_options.mode)));
    if (_options.mode != SessionMode::Live && !_store)
        throw GatewayError(fmt::format("{} mode needs a store", mode_name(_options.mode)));
    if (!_options.sleep)
        _options.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (_options.retry.attempts < 1)
        throw GatewayError("retry attempts must be at least 1");
}

ChatResponse Gateway::call_provider(const ChatRequest& request)
{
    auto backoff = _options.retry.initial_backoff;
    for (int attempt = 1;; ++attempt)
    {
        if (_limiter)
            _limiter->acquire();
        try
        {
            return _provider->send(request);
        }
        catch (const ProviderError& e)
        {
            if (e.status() != 429)
                throw;
            if (attempt >= _options.retry.attempts)
                throw RateLimited(fmt::format("rate limited after {} attempts: {}", attempt, e.body().substr(0, 300)));
        }
        _options.sleep(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<std::int64_t>(static_cast<double>(backoff.count()) * _options.retry.multiplier));
    }
}

ChatResponse Gateway::complete(const ChatRequest& request)
{
    validate(request);
    std::string hash = request_hash(request);

    auto lookup = [&]() -> std::optional<ChatResponse> {
        if (auto hit = _store->find(hash); hit && hit->contains("response"))
            return response_from_json((*hit)["response"]);
        return std::nullopt;
    };
    auto record = [&] {
        auto response = call_provider(request);
        _store->append({ { "hash", hash }, { "request", to_json(request) }, { "response", to_json(response) } });
        return response;
    };

    switch (_options.mode)
    {
    case SessionMode::Replay:
        if (auto hit = lookup())
            return *hit;
        throw ReplayMiss(hash);
    case SessionMode::Record:
        if (_options.dedup)
            return _flights.run(hash, lookup, record);
        return record();
    case SessionMode::Live:
        break;
    }
    return call_provider(request);
}

} // namespace steerbench::llm
