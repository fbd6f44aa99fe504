// SPDX-License-Identifier: Apache-2.0
#include <steerbench/steering/steering.hpp>

#include <steerbench/tasks/verify.hpp>

namespace steerbench::steering
{

namespace
{

    const std::string no_execution = "No code was executed.";

    llm::ChatRequest finalize(llm::ChatRequest r, Deps& deps, Attempt& attempt)
    {
        r.model_id = deps.model_id;
        r.temperature = deps.temperature;
        r.max_output_tokens = deps.max_output_tokens;
        if (!deps.capabilities.system_prompt && !r.system_prompt.empty())
        {
            auto& first = r.messages.front().content;
            first = r.system_prompt + "\n\n" + first;
            r.system_prompt.clear();
            attempt.warnings.push_back("model " + deps.model_id +
                                       " does not accept system prompts; system text moved into the user turn");
        }
        return r;
    }

    const llm::ChatResponse& call(Deps& deps, Attempt& attempt, const std::string& stage, const llm::ChatRequest& r)
    {
        auto response = deps.gateway.complete(r);
        attempt.cost.tokens += response.prompt_tokens + response.completion_tokens;
        attempt.cost.latency_ms += response.latency_ms;
        attempt.transcript.push_back({ stage, r, std::move(response) });
        return attempt.transcript.back().response;
    }

    // Sets modality and final answer from one response, executing its first executable block.
    std::optional<sandbox::ExecutionResult> resolve(Deps& deps, Attempt& attempt, const std::string& response)
    {
        auto block = sandbox::first_executable_block(response, deps.guest_language);
        if (!block)
        {
            attempt.modality = sandbox::Modality::Text;
            attempt.final_answer = response;
            return std::nullopt;
        }
        auto result = deps.executor.execute(*block, deps.limits);
        attempt.cost.exec_ms += result.duration_ms;
        attempt.executions.push_back({ *block, result });
        attempt.modality = sandbox::Modality::Code;
        attempt.final_answer = result.stdout_text;
        return result;
    }

    void judge(Attempt& attempt, const tasks::TaskInstance& instance,
               const std::optional<sandbox::ExecutionResult>& last)
    {
        if (last && last->timed_out)
            attempt.verdict = tasks::Verdict::fail(tasks::FailureReason::Timeout);
        else
            attempt.verdict = tasks::verify(instance, attempt.final_answer);
    }

    Attempt start(MethodId method, const tasks::TaskInstance& instance)
    {
        Attempt a;
        a.instance_id = instance.id;
        a.method = method;
        a.turn = 1;
        return a;
    }

} // namespace

Attempt run_single_shot(MethodId method, const tasks::TaskInstance& instance, Deps& deps)
{
    if (!is_refinable(method))
        throw SteeringError("run_single_shot handles methods 1-6, not " + std::string(method_name(method)));
    Attempt a = start(method, instance);
    auto request = finalize(assemble_prompt(method, instance, deps.assets, deps.autogen_asset), deps, a);
    const auto& response = call(deps, a, "answer", request);
    auto executed = resolve(deps, a, response.text);
    judge(a, instance, executed);
    return a;
}

Attempt run_emulated_interpreter(const tasks::TaskInstance& instance, Deps& deps, const SteeringConfig& config,
                                 bool encourage_code)
{
    MethodId method = encourage_code ? MethodId::CodeInterpreterPlus : MethodId::CodeInterpreter;
    Attempt a = start(method, instance);
    auto request = finalize(assemble_prompt(method, instance, deps.assets, deps.autogen_asset), deps, a);
    std::optional<sandbox::ExecutionResult> last;
    for (int round = 1;; ++round)
    {
        std::string text = call(deps, a, "interpreter", request).text;
        last = resolve(deps, a, text);
        if (!last || contains_terminate(text) || round >= config.max_tool_turns)
            break;
        request.messages.push_back({ llm::Role::Assistant, text });
        request.messages.push_back({ llm::Role::Tool, format_execution(*last) });
    }
    judge(a, instance, last);
    return a;
}

Attempt run_code_text_sum(const tasks::TaskInstance& instance, Deps& deps)
{
    Attempt text_branch = run_single_shot(MethodId::AllText, instance, deps);
    Attempt code_branch = run_single_shot(MethodId::AllCode, instance, deps);

    Attempt a = start(MethodId::CodeTextSum, instance);
    for (auto* branch: { &text_branch, &code_branch })
    {
        std::string stage = branch == &text_branch ? "text" : "code";
        for (auto ex: branch->transcript)
        {
            ex.stage = stage;
            a.transcript.push_back(std::move(ex));
        }
        a.executions.insert(a.executions.end(), branch->executions.begin(), branch->executions.end());
        a.warnings.insert(a.warnings.end(), branch->warnings.begin(), branch->warnings.end());
        a.cost.tokens += branch->cost.tokens;
        a.cost.latency_ms += branch->cost.latency_ms;
        a.cost.exec_ms += branch->cost.exec_ms;
    }

    std::string text_answer = text_branch.transcript.back().response.text;
    if (!text_branch.executions.empty())
        text_answer += "\n\nCode execution result:\n" + format_execution(text_branch.executions.back().result);
    std::string exec_result =
        code_branch.executions.empty() ? no_execution : format_execution(code_branch.executions.back().result);

    std::string user = deps.assets.get("summarizer") + "\n\n" +
                       deps.assets.render("summarizer_input", {
                                                                  { "question", instance.prompt },
                                                                  { "text_answer", text_answer },
                                                                  { "code_answer", code_branch.transcript.back().response.text },
                                                                  { "exec_result", exec_result },
                                                              });
    llm::ChatRequest request;
    request.messages.push_back({ llm::Role::User, std::move(user) });
    request = finalize(std::move(request), deps, a);
    std::string text = call(deps, a, "summary", request).text;
    auto executed = resolve(deps, a, text);
    judge(a, instance, executed);
    return a;
}

Attempt run_self_estimate(const tasks::TaskInstance& instance, Deps& deps)
{
    Attempt a = start(MethodId::SelfEstimateScore, instance);
    auto request = finalize(assemble_prompt(MethodId::SelfEstimateScore, instance, deps.assets), deps, a);
    std::string text = call(deps, a, "answer", request).text;
    auto scores = parse_self_scores(text);
    a.coding_score = scores.coding;
    a.text_score = scores.text;
    auto executed = resolve(deps, a, text);
    judge(a, instance, executed);
    return a;
}

std::vector<Attempt> refine_loop(const Attempt& first, const tasks::TaskInstance& instance, Deps& deps,
                                 const SteeringConfig& config)
{
    if (!is_refinable(first.method) || first.turn != 1 || first.transcript.empty())
        throw SteeringError("refine_loop starts from a turn-1 attempt of methods 1-6");

    std::vector<Attempt> turns { first };
    llm::ChatRequest request = first.transcript.back().request;
    std::string last_text = first.transcript.back().response.text;
    std::size_t executions_before = 0;

    for (int turn = 2; turn <= config.max_turns; ++turn)
    {
        const Attempt& prev = turns.back();
        bool prev_ran_code = prev.modality == sandbox::Modality::Code && prev.executions.size() > executions_before;
        std::string exec_result = prev_ran_code ? format_execution(prev.executions.back().result) : no_execution;

        request.messages.push_back({ llm::Role::Assistant, last_text });
        request.messages.push_back(
            { llm::Role::User, deps.assets.render("reflection", { { "previous_answer", prev.final_answer },
                                                                  { "exec_result", exec_result } }) });

        Attempt next = prev;
        next.turn = turn;
        executions_before = next.executions.size();
        last_text = call(deps, next, "refine", request).text;
        auto executed = resolve(deps, next, last_text);
        judge(next, instance, executed);

        bool stop = contains_terminate(last_text) || next.final_answer == prev.final_answer;
        turns.push_back(std::move(next));
        if (stop)
            break;
    }
    return turns;
}

std::vector<Attempt> run_method(MethodId method, const tasks::TaskInstance& instance, Deps& deps,
                                const SteeringConfig& config)
{
    switch (method)
    {
    case MethodId::CodeInterpreter:
        return { run_emulated_interpreter(instance, deps, config, false) };
    case MethodId::CodeInterpreterPlus:
        return { run_emulated_interpreter(instance, deps, config, true) };
    case MethodId::CodeTextSum:
        return { run_code_text_sum(instance, deps) };
    case MethodId::SelfEstimateScore:
        return { run_self_estimate(instance, deps) };
    default:
        break;
    }
    Attempt first = run_single_shot(method, instance, deps);
    if (config.max_turns <= 1)
        return { first };
    return refine_loop(first, instance, deps, config);
}

} // namespace steerbench::steering
