// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/llm/gateway.hpp>
#include <steerbench/metrics/metrics.hpp>
#include <steerbench/sandbox/sandbox.hpp>
#include <steerbench/steering/steering.hpp>
#include <steerbench/tasks/task.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerbench::harness
{

class HarnessError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ConfigError: public HarnessError
{
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return _field; }

private:
    std::string _field;
};

class NoRecords: public HarnessError
{
public:
    using HarnessError::HarnessError;
};

struct TaskSpec
{
    tasks::TaskKind kind = tasks::TaskKind::NumberMultiply;
    tasks::Complexity complexity;
    int trials = 100;
    /// Dataset kinds only. Relative paths are resolved against the config file.
    std::filesystem::path dataset;
};

struct ProviderSettings
{
    std::string name = "openai";
    std::string base_url = "https://api.openai.com";
    int timeout_s = 300;
    /// Requests per second; 0 disables rate limiting.
    double rate_per_second = 0.0;
    double burst = 1.0;
    std::optional<bool> system_prompt;
};

struct SandboxSettings
{
    std::string interpreter = "python3";
    /// Shim command line; empty runs the interpreter directly.
    std::vector<std::string> shim;
    sandbox::Limits limits;
};

struct RunConfig
{
    std::string model_id;
    ProviderSettings provider;
    std::vector<steering::MethodId> methods;
    std::vector<TaskSpec> tasks;
    std::uint64_t seed = 0;
    int max_turns = 1;
    int max_tool_turns = 5;
    int parallelism = 1;
    llm::SessionMode mode = llm::SessionMode::Replay;
    std::filesystem::path output_dir;
    std::filesystem::path store;
    std::filesystem::path assets_dir;
    double temperature = 0.0;
    int max_output_tokens = 4096;
    std::string autogen_asset = "autogen_system";
    SandboxSettings sandbox;
};

/// INI text with [run], [provider], [store], [sandbox] and one [task.<name>] section per task.
RunConfig parse_config(const std::string& ini_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& file);

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& config);

llm::ModelCapabilities effective_capabilities(const RunConfig& config);

/// Fields that change what a run produces. Parallelism, mode and filesystem locations are left out.
nlohmann::json hashed_fields(const RunConfig& config);
std::string config_hash(const RunConfig& config);

/// Instances in config order: generated with seeds seed, seed+1, ... or the first trials dataset lines.
std::vector<tasks::TaskInstance> plan_instances(const RunConfig& config);

/// Parses "a,b,c" or an inclusive range "lo..hi" over every complexity parameter (e.g. "1_1..4_4").
std::vector<tasks::Complexity> parse_axis(tasks::TaskKind kind, const std::string& spec);

/// The base config narrowed to one method over a grid of complexity levels of one procedural kind.
RunConfig sweep_config(const RunConfig& base, tasks::TaskKind kind, const std::string& axis, int trials,
                       steering::MethodId method);

struct RunSummary
{
    std::size_t jobs = 0;
    std::size_t skipped = 0;
    std::size_t executed = 0;
    std::size_t records_written = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::map<std::string, std::size_t> failures_by_reason;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    /// 0 all final attempts succeeded, 1 task-level failures, 2 infrastructure errors.
    int exit_code() const noexcept;
};

/// Test seams: a provider replacing the HTTP client, an executor replacing the guest runner.
struct RunHooks
{
    std::shared_ptr<llm::Provider> provider;
    std::shared_ptr<sandbox::Executor> executor;
};

inline constexpr std::string_view records_file_name = "records.jsonl";
inline constexpr std::string_view manifest_file_name = "manifest.json";

/// Schedules every (instance, method) job, skips complete ones, appends records, rewrites the manifest.
RunSummary run(const RunConfig& config, const RunHooks& hooks = {});

std::string format_summary(const RunSummary& summary);

/// Loads <dir>/records.jsonl. Throws NoRecords when absent or empty.
std::vector<metrics::RunRecord> read_records(const std::filesystem::path& dir);

/// Builds a report, writes <out_dir>/<name>.csv and returns it.
metrics::Report write_report(const std::filesystem::path& records_dir, const std::string& name,
                             const std::filesystem::path& out_dir, int turn = 1);

} // namespace steerbench::harness
