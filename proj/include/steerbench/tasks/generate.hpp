// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <cstdint>

namespace steerbench::tasks
{

/// Builds a solvable instance; the result is a pure function of (kind, complexity, seed).
/// Throws UnsupportedKind for dataset kinds and InvalidComplexity for bad parameters.
TaskInstance generate(TaskKind kind, const Complexity& complexity, std::uint64_t seed);

} // namespace steerbench::tasks
