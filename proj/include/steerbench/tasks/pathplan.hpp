// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <optional>
#include <string>
#include <vector>

namespace steerbench::tasks::pathplan
{

/// Shortest 4-connected path from start to goal avoiding obstacles, endpoints included.
std::optional<std::vector<Cell>> shortest_path(const PathPlanPayload& grid);

/// "[(0, 0), (0, 1)]"
std::string format_path(const std::vector<Cell>& path);

} // namespace steerbench::tasks::pathplan
