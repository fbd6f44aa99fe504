// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/boxlift.hpp>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <numeric>

namespace steerbench::tasks::boxlift
{

Schedule greedy_schedule(const std::vector<int>& weights, const std::vector<int>& capacities)
{
    long total_capacity = std::accumulate(capacities.begin(), capacities.end(), 0L);
    std::vector<int> remaining = weights;
    std::sort(remaining.begin(), remaining.end(), std::greater<>());
    if (!remaining.empty() && remaining.front() > total_capacity)
        throw TaskError(fmt::format("box of weight {} exceeds the combined lifting capacity {}", remaining.front(),
                                    total_capacity));

    std::vector<std::size_t> by_capacity(capacities.size());
    std::iota(by_capacity.begin(), by_capacity.end(), 0);
    std::stable_sort(by_capacity.begin(), by_capacity.end(),
                     [&](std::size_t a, std::size_t b) { return capacities[a] < capacities[b]; });

    Schedule schedule;
    while (!remaining.empty())
    {
        std::vector<bool> used(capacities.size(), false);
        Step step;
        std::vector<int> left;
        for (int w: remaining)
        {
            std::optional<std::size_t> single;
            for (auto idx: by_capacity)
            {
                if (!used[idx] && capacities[idx] >= w)
                {
                    single = idx;
                    break;
                }
            }
            if (single)
            {
                used[*single] = true;
                step.push_back({ w, { static_cast<int>(*single) } });
                continue;
            }
            std::vector<int> team;
            long sum = 0;
            for (auto it = by_capacity.rbegin(); it != by_capacity.rend() && sum < w; ++it)
            {
                if (used[*it])
                    continue;
                team.push_back(static_cast<int>(*it));
                sum += capacities[*it];
            }
            if (sum >= w)
            {
                for (int idx: team)
                    used[idx] = true;
                std::sort(team.begin(), team.end());
                step.push_back({ w, team });
            }
            else
                left.push_back(w);
        }
        schedule.push_back(std::move(step));
        remaining = std::move(left);
    }
    return schedule;
}

int step_limit_for(const std::vector<int>& weights, const std::vector<int>& capacities)
{
    int steps = static_cast<int>(greedy_schedule(weights, capacities).size());
    return (3 * steps + 1) / 2;
}

std::string format_schedule(const Schedule& schedule)
{
    std::string out;
    for (std::size_t i = 0; i < schedule.size(); ++i)
    {
        std::vector<std::string> parts;
        for (const auto& a: schedule[i])
            parts.push_back(fmt::format("({}, [{}])", a.weight, fmt::join(a.lifters, ", ")));
        out += fmt::format("Step {}: [{}]\n", i + 1, fmt::join(parts, ", "));
    }
    return out;
}

} // namespace steerbench::tasks::boxlift
