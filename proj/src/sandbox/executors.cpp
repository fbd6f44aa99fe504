// SPDX-License-Identifier: Apache-2.0
#include "process.hpp"

#include <steerbench/sandbox/sandbox.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace steerbench::sandbox
{

namespace
{

    const std::vector<std::string> guest_env = {
        "PYTHONDONTWRITEBYTECODE=1",
        "PYTHONHASHSEED=0",
        "PYTHONIOENCODING=utf-8",
        "PYTHONUNBUFFERED=1",
    };

    std::filesystem::path write_candidate(const detail::ScratchDir& dir, const CodeBlock& block)
    {
        auto path = dir.path() / "candidate.py";
        std::ofstream out(path, std::ios::binary);
        out << block.body;
        if (!out)
            throw SandboxError("cannot write candidate source to " + path.string());
        return path;
    }

    std::chrono::milliseconds to_ms(double seconds)
    {
        return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(seconds * 1000.0)));
    }

} // namespace

DirectExecutor::DirectExecutor(std::string interpreter): _interpreter(std::move(interpreter)) {}

ExecutionResult DirectExecutor::execute(const CodeBlock& block, const Limits& limits)
{
    detail::ScratchDir dir;
    auto source = write_candidate(dir, block);

    detail::SpawnSpec spec;
    spec.argv = { _interpreter, source.filename().string() };
    spec.cwd = dir.path();
    spec.extra_env = guest_env;
    spec.memory_cap = limits.memory_cap;
    spec.capture_cap = limits.output_cap;
    spec.soft_deadline = to_ms(limits.timeout_s);
    spec.hard_deadline = to_ms(limits.timeout_s) + kill_grace;

    auto o = detail::spawn_and_wait(spec);
    ExecutionResult r;
    r.stdout_text = std::move(o.out);
    r.stderr_text = std::move(o.err);
    r.exit_code = o.exit_code;
    r.duration_ms = o.duration_ms;
    r.timed_out = o.soft_deadline_hit || o.hard_deadline_hit;
    return r;
}

ShimExecutor::ShimExecutor(std::vector<std::string> command): _command(std::move(command))
{
    if (_command.empty())
        throw GuestUnavailable("empty shim command");
}

ExecutionResult ShimExecutor::execute(const CodeBlock& block, const Limits& limits)
{
    detail::ScratchDir dir;
    auto source = write_candidate(dir, block);

    detail::SpawnSpec spec;
    spec.argv = _command;
    spec.argv.push_back(source.filename().string());
    spec.argv.push_back(fmt::format("{}", limits.timeout_s));
    spec.argv.push_back(std::to_string(limits.output_cap));
    spec.argv.push_back(std::to_string(limits.memory_cap));
    spec.cwd = dir.path();
    spec.extra_env = guest_env;
    spec.capture_cap = 8 * limits.output_cap + 64 * 1024;
    spec.hard_deadline = to_ms(limits.timeout_s) + kill_grace;

    auto o = detail::spawn_and_wait(spec);
    if (o.hard_deadline_hit)
    {
        ExecutionResult r;
        r.exit_code = o.exit_code;
        r.duration_ms = o.duration_ms;
        r.timed_out = true;
        r.stderr_text = "shim did not report before the hard deadline";
        return r;
    }

    nlohmann::json report;
    try
    {
        report = nlohmann::json::parse(o.out);
    }
    catch (const nlohmann::json::parse_error&)
    {
        throw ShimProtocolError(fmt::format("shim exited with {} without a JSON report; stderr: {}", o.exit_code,
                                            o.err.substr(0, 512)));
    }
    auto r = execution_from_json(report);
    if (r.stdout_text.size() > limits.output_cap)
        r.stdout_text.resize(limits.output_cap);
    if (r.stderr_text.size() > limits.output_cap)
        r.stderr_text.resize(limits.output_cap);
    return r;
}

} // namespace steerbench::sandbox
