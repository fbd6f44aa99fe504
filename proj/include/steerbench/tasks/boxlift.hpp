// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <string>
#include <vector>

namespace steerbench::tasks::boxlift
{

struct Assignment
{
    int weight = 0;
    std::vector<int> lifters;
};

using Step = std::vector<Assignment>;
using Schedule = std::vector<Step>;

/// Largest-box-first reference scheduler. Each step lifts remaining boxes in decreasing
/// weight order, preferring the smallest single lifter strong enough and otherwise
/// pooling the strongest free lifters. Every box must be liftable by all lifters together.
Schedule greedy_schedule(const std::vector<int>& weights, const std::vector<int>& capacities);

/// ceil(1.5 x greedy steps).
int step_limit_for(const std::vector<int>& weights, const std::vector<int>& capacities);

/// "Step 1: [(50, [0, 2]), (30, [1])]" lines.
std::string format_schedule(const Schedule& schedule);

} // namespace steerbench::tasks::boxlift
