// SPDX-License-Identifier: Apache-2.0
#include <steerbench/steering/steering.hpp>

namespace steerbench::steering
{

namespace
{

    nlohmann::json optional_number(const std::optional<double>& v)
    {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }

    std::optional<double> number_or_null(const nlohmann::json& j, const char* key)
    {
        if (!j.contains(key) || j[key].is_null())
            return std::nullopt;
        return j[key].get<double>();
    }

    nlohmann::json block_json(const sandbox::CodeBlock& b)
    {
        return { { "language_tag", b.language_tag }, { "body", b.body }, { "index", b.index } };
    }

    sandbox::CodeBlock block_from_json(const nlohmann::json& j)
    {
        return { j.at("language_tag").get<std::string>(), j.at("body").get<std::string>(),
                 j.at("index").get<std::size_t>() };
    }

} // namespace

nlohmann::json to_json(const Attempt& a)
{
    auto transcript = nlohmann::json::array();
    for (const auto& ex: a.transcript)
        transcript.push_back(
            { { "stage", ex.stage }, { "request", llm::to_json(ex.request) }, { "response", llm::to_json(ex.response) } });
    auto executions = nlohmann::json::array();
    for (const auto& e: a.executions)
        executions.push_back({ { "block", block_json(e.block) }, { "result", sandbox::to_json(e.result) } });

    return {
        { "instance_id", a.instance_id },
        { "method", method_name(a.method) },
        { "method_number", method_number(a.method) },
        { "turn", a.turn },
        { "transcript", transcript },
        { "executions", executions },
        { "modality", sandbox::modality_name(a.modality) },
        { "final_answer", a.final_answer },
        { "verdict", tasks::to_json(a.verdict) },
        { "cost", { { "tokens", a.cost.tokens }, { "latency_ms", a.cost.latency_ms }, { "exec_ms", a.cost.exec_ms } } },
        { "coding_score", optional_number(a.coding_score) },
        { "text_score", optional_number(a.text_score) },
        { "warnings", a.warnings },
    };
}

Attempt attempt_from_json(const nlohmann::json& j)
{
    try
    {
        Attempt a;
        a.instance_id = j.at("instance_id").get<std::string>();
        auto method = parse_method(j.at("method").get<std::string>());
        if (!method)
            throw SteeringError("unknown method " + j.at("method").dump());
        a.method = *method;
        a.turn = j.at("turn").get<int>();
        for (const auto& ex: j.at("transcript"))
            a.transcript.push_back({ ex.at("stage").get<std::string>(), llm::request_from_json(ex.at("request")),
                                     llm::response_from_json(ex.at("response")) });
        for (const auto& e: j.at("executions"))
            a.executions.push_back({ block_from_json(e.at("block")), sandbox::execution_from_json(e.at("result")) });
        auto modality = sandbox::parse_modality(j.at("modality").get<std::string>());
        if (!modality)
            throw SteeringError("unknown modality " + j.at("modality").dump());
        a.modality = *modality;
        a.final_answer = j.at("final_answer").get<std::string>();
        a.verdict = tasks::verdict_from_json(j.at("verdict"));
        const auto& cost = j.at("cost");
        a.cost = { cost.at("tokens").get<std::int64_t>(), cost.at("latency_ms").get<std::int64_t>(),
                   cost.at("exec_ms").get<std::int64_t>() };
        a.coding_score = number_or_null(j, "coding_score");
        a.text_score = number_or_null(j, "text_score");
        a.warnings = j.value("warnings", std::vector<std::string> {});
        return a;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw SteeringError(std::string("malformed attempt: ") + e.what());
    }
}

RecordingExecutor::RecordingExecutor(llm::SessionMode mode, std::shared_ptr<sandbox::Executor> inner,
                                     std::shared_ptr<llm::ReplayStore> store):
    _mode(mode), _inner(std::move(inner)), _store(std::move(store))
{
    if (_mode != llm::SessionMode::Replay && !_inner)
        throw SteeringError("recording executor needs an inner executor outside replay mode");
    if (_mode != llm::SessionMode::Live && !_store)
        throw SteeringError("recording executor needs a store in record and replay modes");
}

std::string RecordingExecutor::key(const sandbox::CodeBlock& block, const sandbox::Limits& limits)
{
    nlohmann::json k = {
        { "execution", block.body },
        { "timeout_s", limits.timeout_s },
        { "output_cap", limits.output_cap },
        { "memory_cap", limits.memory_cap },
    };
    return llm::sha256_hex(k.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

sandbox::ExecutionResult RecordingExecutor::execute(const sandbox::CodeBlock& block, const sandbox::Limits& limits)
{
    if (_mode == llm::SessionMode::Live)
        return _inner->execute(block, limits);
    std::string hash = key(block, limits);
    auto lookup = [&]() -> std::optional<sandbox::ExecutionResult> {
        if (auto hit = _store->find(hash); hit && hit->contains("result"))
            return sandbox::execution_from_json((*hit)["result"]);
        return std::nullopt;
    };
    if (_mode == llm::SessionMode::Replay)
    {
        if (auto hit = lookup())
            return *hit;
        throw llm::ReplayMiss(hash);
    }
    return _flights.run(hash, lookup, [&] {
        auto result = _inner->execute(block, limits);
        _store->append({ { "hash", hash },
                         { "execution", { { "body", block.body }, { "timeout_s", limits.timeout_s } } },
                         { "result", sandbox::to_json(result) } });
        return result;
    });
}

} // namespace steerbench::steering
