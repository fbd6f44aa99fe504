// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <map>
#include <string>
#include <vector>

namespace steerbench::tasks::boxnet
{

/// "square[0.5, 1.5]" for row 0, column 1.
std::string square_name(Cell cell);
/// "Agent[0.5, 1.5]".
std::string agent_name(Cell cell);

/// One step maps acting agents to their action, e.g. "move(box_red, target_red)".
using Step = std::vector<std::pair<std::string, std::string>>;
using Plan = std::vector<Step>;

/// [{"Agent[0.5, 0.5]":"move(box_red, square[0.5, 1.5])"}, ...]
std::string format_plan(const Plan& plan);

/// A plan that walks every box to its goal cell along rows then columns.
Plan reference_plan(const BoxNetPayload& payload);

} // namespace steerbench::tasks::boxnet
