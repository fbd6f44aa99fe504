// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <string_view>

namespace steerbench::tasks
{

// Verifiers never throw: unparseable answers produce a failed Verdict.

/// NumberMultiply, Letters, the multiple-choice BBH kinds and the numeric kinds.
Verdict verify_exact(const TaskInstance& instance, std::string_view answer);
Verdict verify_game24(const TaskInstance& instance, std::string_view answer);
Verdict verify_boxlift(const TaskInstance& instance, std::string_view answer);
Verdict verify_boxnet(const TaskInstance& instance, std::string_view answer);
Verdict verify_blocksworld(const TaskInstance& instance, std::string_view answer);
Verdict verify_pathplan(const TaskInstance& instance, std::string_view answer);

/// Dispatches on instance.kind.
Verdict verify(const TaskInstance& instance, std::string_view answer);

} // namespace steerbench::tasks
