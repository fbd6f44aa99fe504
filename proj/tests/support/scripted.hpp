// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/llm/gateway.hpp>
#include <steerbench/sandbox/sandbox.hpp>

#include <functional>
#include <map>
#include <mutex>
#include <string>

namespace testkit
{

// Deterministic stand-in for a hosted model: replies come from a callback over the request.
class ScriptedModel: public steerbench::llm::Provider
{
public:
    using Reply = std::function<std::string(const steerbench::llm::ChatRequest&)>;

    explicit ScriptedModel(Reply reply): _reply(std::move(reply)) {}

    steerbench::llm::ChatResponse send(const steerbench::llm::ChatRequest& request) override
    {
        std::size_t chars = request.system_prompt.size();
        for (const auto& m: request.messages)
            chars += m.content.size();
        std::string text = _reply(request);
        std::lock_guard lock(_mutex);
        ++calls;
        return { text, static_cast<std::int64_t>(chars / 4 + 1), static_cast<std::int64_t>(text.size() / 4 + 1),
                 static_cast<std::int64_t>(100 + text.size() % 50) };
    }

    int calls = 0;

private:
    Reply _reply;
    std::mutex _mutex;
};

// Executes nothing: results are looked up by the exact block body.
class TableExecutor: public steerbench::sandbox::Executor
{
public:
    std::map<std::string, steerbench::sandbox::ExecutionResult> table;
    int runs = 0;

    steerbench::sandbox::ExecutionResult execute(const steerbench::sandbox::CodeBlock& block,
                                                 const steerbench::sandbox::Limits&) override
    {
        std::lock_guard lock(_mutex);
        ++runs;
        auto it = table.find(block.body);
        if (it != table.end())
            return it->second;
        return { "", "NameError: unknown program\n", 1, 20, false };
    }

private:
    std::mutex _mutex;
};

inline std::string last_user(const steerbench::llm::ChatRequest& r)
{
    for (auto it = r.messages.rbegin(); it != r.messages.rend(); ++it)
        if (it->role != steerbench::llm::Role::Assistant)
            return it->content;
    return {};
}

inline std::string fence(const std::string& body)
{
    return "```python\n" + body + "```";
}

} // namespace testkit
