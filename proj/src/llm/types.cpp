// SPDX-License-Identifier: Apache-2.0
#include <steerbench/llm/gateway.hpp>

#include <fmt/format.h>

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace steerbench::llm
{

std::string_view role_name(Role role) noexcept
{
    switch (role)
    {
    case Role::User:
        return "user";
    case Role::Assistant:
        return "assistant";
    case Role::Tool:
        return "tool";
    }
    return "user";
}

std::optional<Role> parse_role(std::string_view name)
{
    for (Role r: { Role::User, Role::Assistant, Role::Tool })
        if (role_name(r) == name)
            return r;
    return std::nullopt;
}

std::string_view mode_name(SessionMode mode) noexcept
{
    switch (mode)
    {
    case SessionMode::Live:
        return "live";
    case SessionMode::Record:
        return "record";
    case SessionMode::Replay:
        return "replay";
    }
    return "replay";
}

std::optional<SessionMode> parse_mode(std::string_view name)
{
    for (SessionMode m: { SessionMode::Live, SessionMode::Record, SessionMode::Replay })
        if (mode_name(m) == name)
            return m;
    return std::nullopt;
}

ProviderError::ProviderError(int status, std::string body):
    GatewayError(fmt::format("provider returned HTTP {}: {}", status, body.substr(0, 300))), _status(status),
    _body(std::move(body))
{
}

ReplayMiss::ReplayMiss(std::string hash): GatewayError("request not in replay store: " + hash), _hash(std::move(hash))
{
}

namespace
{

    nlohmann::json messages_json(const std::vector<Message>& messages)
    {
        auto out = nlohmann::json::array();
        for (const auto& m: messages)
            out.push_back({ { "role", role_name(m.role) }, { "content", m.content } });
        return out;
    }

} // namespace

nlohmann::json to_json(const ChatRequest& r)
{
    return {
        { "model_id", r.model_id },
        { "system_prompt", r.system_prompt },
        { "messages", messages_json(r.messages) },
        { "temperature", r.temperature },
        { "max_output_tokens", r.max_output_tokens },
    };
}

ChatRequest request_from_json(const nlohmann::json& j)
{
    try
    {
        ChatRequest r;
        r.model_id = j.at("model_id").get<std::string>();
        r.system_prompt = j.at("system_prompt").get<std::string>();
        r.temperature = j.at("temperature").get<double>();
        r.max_output_tokens = j.value("max_output_tokens", r.max_output_tokens);
        for (const auto& m: j.at("messages"))
        {
            auto role = parse_role(m.at("role").get<std::string>());
            if (!role)
                throw InvalidRequest("unknown role " + m.at("role").dump());
            r.messages.push_back({ *role, m.at("content").get<std::string>() });
        }
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidRequest(std::string("malformed request: ") + e.what());
    }
}

nlohmann::json to_json(const ChatResponse& r)
{
    return {
        { "text", r.text },
        { "prompt_tokens", r.prompt_tokens },
        { "completion_tokens", r.completion_tokens },
        { "latency_ms", r.latency_ms },
    };
}

ChatResponse response_from_json(const nlohmann::json& j)
{
    try
    {
        return { j.at("text").get<std::string>(), j.at("prompt_tokens").get<std::int64_t>(),
                 j.at("completion_tokens").get<std::int64_t>(), j.at("latency_ms").get<std::int64_t>() };
    }
    catch (const nlohmann::json::exception& e)
    {
        throw GatewayError(std::string("malformed response record: ") + e.what());
    }
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw GatewayError("sha256 failed");
    std::string out;
    for (unsigned int i = 0; i < len; ++i)
        out += fmt::format("{:02x}", digest[i]);
    return out;
}

std::string request_hash(const ChatRequest& r)
{
    nlohmann::json key = {
        { "model_id", r.model_id },
        { "system_prompt", r.system_prompt },
        { "messages", messages_json(r.messages) },
        { "temperature", r.temperature },
    };
    return sha256_hex(key.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

void validate(const ChatRequest& r)
{
    if (r.messages.empty())
        throw InvalidRequest("request has no messages");
    if (r.messages.front().role != Role::User)
        throw InvalidRequest("first message must come from the user");
    for (std::size_t i = 1; i < r.messages.size(); ++i)
    {
        Role prev = r.messages[i - 1].role;
        Role cur = r.messages[i].role;
        if (prev == cur)
            throw InvalidRequest(fmt::format("messages {} and {} share the role '{}'", i - 1, i, role_name(cur)));
        if (cur == Role::Tool && prev != Role::Assistant)
            throw InvalidRequest(fmt::format("tool message {} does not follow an assistant turn", i));
    }
    if (r.messages.back().role == Role::Assistant)
        throw InvalidRequest("last message is the assistant's; nothing to complete");
}

Cost accumulate_cost(const std::vector<ChatResponse>& responses)
{
    Cost c;
    for (const auto& r: responses)
    {
        c.total_tokens += r.prompt_tokens + r.completion_tokens;
        c.total_latency_ms += r.latency_ms;
    }
    return c;
}

ModelCapabilities default_capabilities(std::string_view model_id)
{
    ModelCapabilities caps;
    if (model_id.rfind("o1", 0) == 0)
        caps.system_prompt = false;
    return caps;
}

std::string api_key_from_env(std::string_view provider_name)
{
    std::string var = "STEERBENCH_API_KEY_";
    for (char c: provider_name)
        var += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                                           : '_';
    const char* value = std::getenv(var.c_str());
    if (!value || !*value)
        throw MissingCredentials("environment variable " + var + " is not set");
    return value;
}

} // namespace steerbench::llm
