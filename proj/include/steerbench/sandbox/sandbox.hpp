// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steerbench::sandbox
{

struct CodeBlock
{
    std::string language_tag;
    std::string body;
    std::size_t index = 0;
};

enum class Modality
{
    Code,
    Text,
};

std::string_view modality_name(Modality m) noexcept;
std::optional<Modality> parse_modality(std::string_view name);

inline constexpr std::string_view default_guest_language = "python";

/// Triple-backtick fenced regions in order. An unterminated final fence runs to the end of the text.
std::vector<CodeBlock> extract_code_blocks(std::string_view response);

/// Empty tags count as executable, as do the usual spellings of the guest language.
bool is_executable_tag(std::string_view tag, std::string_view guest = default_guest_language);

std::optional<CodeBlock> first_executable_block(std::string_view response,
                                                std::string_view guest = default_guest_language);

Modality classify_modality(std::string_view response, std::string_view guest = default_guest_language);

struct Limits
{
    double timeout_s = 30.0;
    std::size_t output_cap = 64 * 1024;
    std::size_t memory_cap = std::size_t { 512 } * 1024 * 1024;
};

struct ExecutionResult
{
    std::string stdout_text;
    std::string stderr_text;
    // Negative values are the number of the signal that ended the process.
    int exit_code = 0;
    std::int64_t duration_ms = 0;
    bool timed_out = false;

    bool ok() const noexcept { return !timed_out && exit_code == 0; }
};

// Invalid UTF-8 in the captured streams is replaced when serialised.
nlohmann::json to_json(const ExecutionResult& result);
/// Accepts the shim report shape {"stdout", "stderr", "exit_code", "duration_ms", "timed_out"}.
ExecutionResult execution_from_json(const nlohmann::json& j);

class SandboxError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The guest (interpreter or shim) could not be spawned. Not a candidate failure.
class GuestUnavailable: public SandboxError
{
public:
    using SandboxError::SandboxError;
};

/// The shim ran but did not produce a single well-formed report.
class ShimProtocolError: public SandboxError
{
public:
    using SandboxError::SandboxError;
};

class Executor
{
public:
    virtual ~Executor() = default;
    virtual ExecutionResult execute(const CodeBlock& block, const Limits& limits) = 0;
};

/// Spawns the interpreter on the candidate file directly, enforcing limits from the parent.
class DirectExecutor: public Executor
{
public:
    explicit DirectExecutor(std::string interpreter = "python3");
    ExecutionResult execute(const CodeBlock& block, const Limits& limits) override;

private:
    std::string _interpreter;
};

/// Runs `command... <source_path> <timeout_s> <output_cap> <memory_cap>` and parses the JSON report.
class ShimExecutor: public Executor
{
public:
    explicit ShimExecutor(std::vector<std::string> command);
    ExecutionResult execute(const CodeBlock& block, const Limits& limits) override;

private:
    std::vector<std::string> _command;
};

inline constexpr std::chrono::seconds kill_grace { 3 };

} // namespace steerbench::sandbox
