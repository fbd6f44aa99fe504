// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace steerbench::sandbox::detail
{

struct SpawnSpec
{
    std::vector<std::string> argv;
    std::filesystem::path cwd;
    std::vector<std::string> extra_env;
    std::optional<std::size_t> memory_cap;
    std::size_t capture_cap = 64 * 1024;
    // SIGTERM to the process group at soft_deadline, SIGKILL at hard_deadline.
    std::optional<std::chrono::milliseconds> soft_deadline;
    std::chrono::milliseconds hard_deadline { 0 };
};

struct SpawnOutcome
{
    std::string out;
    std::string err;
    int exit_code = 0;
    std::int64_t duration_ms = 0;
    bool soft_deadline_hit = false;
    bool hard_deadline_hit = false;
};

/// Throws GuestUnavailable when argv[0] cannot be executed.
SpawnOutcome spawn_and_wait(const SpawnSpec& spec);

/// A fresh private directory removed on destruction.
class ScratchDir
{
public:
    ScratchDir();
    ~ScratchDir();
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const noexcept { return _path; }

private:
    std::filesystem::path _path;
};

} // namespace steerbench::sandbox::detail
