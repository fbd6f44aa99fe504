// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace steerbench::tasks
{

class MissingFile: public TaskError
{
public:
    explicit MissingFile(const std::filesystem::path& path);
};

class MalformedRecord: public TaskError
{
public:
    MalformedRecord(std::size_t line, const std::string& why);
    std::size_t line() const noexcept { return _line; }

private:
    std::size_t _line;
};

/// One instance per non-blank line of {"question", "answer", "options"?} records.
/// Options are appended to the prompt as "Options:\n(A) ...".
std::vector<TaskInstance> load_dataset(const std::filesystem::path& path, TaskKind kind);

} // namespace steerbench::tasks
