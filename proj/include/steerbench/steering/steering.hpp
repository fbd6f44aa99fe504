// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/llm/gateway.hpp>
#include <steerbench/sandbox/sandbox.hpp>
#include <steerbench/tasks/task.hpp>

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steerbench::steering
{

// Numbered 1-10 in this order.
enum class MethodId
{
    OnlyQuestion = 1,
    AllText,
    AllCode,
    AllCodeCoT,
    AutoGenConcat,
    AutoGenSystem,
    CodeInterpreter,
    CodeInterpreterPlus,
    CodeTextSum,
    SelfEstimateScore,
};

inline constexpr MethodId all_methods[] = {
    MethodId::OnlyQuestion,    MethodId::AllText,         MethodId::AllCode,       MethodId::AllCodeCoT,
    MethodId::AutoGenConcat,   MethodId::AutoGenSystem,   MethodId::CodeInterpreter, MethodId::CodeInterpreterPlus,
    MethodId::CodeTextSum,     MethodId::SelfEstimateScore,
};

int method_number(MethodId m) noexcept;
std::string_view method_name(MethodId m) noexcept;
/// Accepts the snake_case name or the number 1-10.
std::optional<MethodId> parse_method(std::string_view text);
/// Methods 1-6 produce a single turn-1 answer that refine_loop can iterate on.
bool is_refinable(MethodId m) noexcept;

class SteeringError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class AssetMissing: public SteeringError
{
public:
    explicit AssetMissing(const std::string& name);
};

/// Named templates with {{slot}} placeholders.
class PromptAssets
{
public:
    /// Every <name>.txt in dir; a single trailing newline is dropped.
    static PromptAssets load(const std::filesystem::path& dir);

    const std::string& get(const std::string& name) const;
    bool contains(const std::string& name) const { return _texts.contains(name); }
    void set(const std::string& name, std::string text) { _texts[name] = std::move(text); }

    /// Throws SteeringError if a slot in the template has no value.
    std::string render(const std::string& name, const std::map<std::string, std::string>& slots) const;

private:
    std::map<std::string, std::string> _texts;
};

std::string substitute(std::string_view text, const std::map<std::string, std::string>& slots);

struct ExecutedBlock
{
    sandbox::CodeBlock block;
    sandbox::ExecutionResult result;
};

struct Exchange
{
    std::string stage;
    llm::ChatRequest request;
    llm::ChatResponse response;
};

struct AttemptCost
{
    std::int64_t tokens = 0;
    std::int64_t latency_ms = 0;
    std::int64_t exec_ms = 0;
};

struct Attempt
{
    std::string instance_id;
    MethodId method = MethodId::OnlyQuestion;
    int turn = 1;
    std::vector<Exchange> transcript;
    std::vector<ExecutedBlock> executions;
    sandbox::Modality modality = sandbox::Modality::Text;
    std::string final_answer;
    tasks::Verdict verdict;
    AttemptCost cost;
    std::optional<double> coding_score;
    std::optional<double> text_score;
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const Attempt& attempt);
Attempt attempt_from_json(const nlohmann::json& j);

struct Deps
{
    llm::Gateway& gateway;
    sandbox::Executor& executor;
    const PromptAssets& assets;
    std::string model_id;
    llm::ModelCapabilities capabilities;
    sandbox::Limits limits;
    double temperature = 0.0;
    int max_output_tokens = 4096;
    std::string guest_language = std::string(sandbox::default_guest_language);
    // Asset used by the two AutoGen methods; camel_system and autogen_paraphrase are the ablations.
    std::string autogen_asset = "autogen_system";
};

struct SteeringConfig
{
    int max_tool_turns = 5;
    int max_turns = 4;
};

/// Methods 7-8 get their first turn, method 9 its text stage. Model fields are left empty.
llm::ChatRequest assemble_prompt(MethodId method, const tasks::TaskInstance& instance, const PromptAssets& assets,
                                 const std::string& autogen_asset = "autogen_system");

/// Case-insensitive whole word, ignoring fenced code.
bool contains_terminate(std::string_view response);

struct SelfScores
{
    std::optional<double> coding;
    std::optional<double> text;
};

SelfScores parse_self_scores(std::string_view response);

/// Text fed back to the model after an execution: exit status, stdout and stderr.
std::string format_execution(const sandbox::ExecutionResult& result);

Attempt run_single_shot(MethodId method, const tasks::TaskInstance& instance, Deps& deps);
Attempt run_emulated_interpreter(const tasks::TaskInstance& instance, Deps& deps, const SteeringConfig& config,
                                 bool encourage_code);
Attempt run_code_text_sum(const tasks::TaskInstance& instance, Deps& deps);
Attempt run_self_estimate(const tasks::TaskInstance& instance, Deps& deps);
/// Turns 1..k; turn t carries the cumulative transcript, executions and cost of turns 1..t.
std::vector<Attempt> refine_loop(const Attempt& first, const tasks::TaskInstance& instance, Deps& deps,
                                 const SteeringConfig& config);

/// One Attempt per turn: refine_loop for methods 1-6 when max_turns > 1, else a single turn.
std::vector<Attempt> run_method(MethodId method, const tasks::TaskInstance& instance, Deps& deps,
                                const SteeringConfig& config);

/// Executes through the replay store: Live passes through, Record stores results, Replay serves them.
class RecordingExecutor: public sandbox::Executor
{
public:
    RecordingExecutor(llm::SessionMode mode, std::shared_ptr<sandbox::Executor> inner,
                      std::shared_ptr<llm::ReplayStore> store);
    sandbox::ExecutionResult execute(const sandbox::CodeBlock& block, const sandbox::Limits& limits) override;

    static std::string key(const sandbox::CodeBlock& block, const sandbox::Limits& limits);

private:
    llm::SessionMode _mode;
    std::shared_ptr<sandbox::Executor> _inner;
    std::shared_ptr<llm::ReplayStore> _store;
    llm::SingleFlight<sandbox::ExecutionResult> _flights;
};

} // namespace steerbench::steering
