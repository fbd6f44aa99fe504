// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/boxnet.hpp>

#include <fmt/format.h>

namespace steerbench::tasks::boxnet
{

std::string square_name(Cell cell)
{
    return fmt::format("square[{}.5, {}.5]", cell.row, cell.col);
}

std::string agent_name(Cell cell)
{
    return fmt::format("Agent[{}.5, {}.5]", cell.row, cell.col);
}

std::string format_plan(const Plan& plan)
{
    std::string out = "[";
    for (std::size_t i = 0; i < plan.size(); ++i)
    {
        if (i > 0)
            out += ", ";
        out += "{";
        for (std::size_t k = 0; k < plan[i].size(); ++k)
        {
            if (k > 0)
                out += ", ";
            out += fmt::format("\"{}\": \"{}\"", plan[i][k].first, plan[i][k].second);
        }
        out += "}";
    }
    return out + "]";
}

Plan reference_plan(const BoxNetPayload& payload)
{
    Plan plan;
    for (const auto& box: payload.boxes)
    {
        if (box.on_goal)
            continue;
        const BoxNetGoal* goal = nullptr;
        for (const auto& g: payload.goals)
            if (g.color == box.color)
                goal = &g;
        if (!goal)
            continue;
        Cell at = box.cell;
        auto walk = [&](Cell next) {
            plan.push_back({ { agent_name(at), fmt::format("move(box_{}, {})", box.color, square_name(next)) } });
            at = next;
        };
        while (at.row != goal->cell.row)
            walk({ at.row + (goal->cell.row > at.row ? 1 : -1), at.col });
        while (at.col != goal->cell.col)
            walk({ at.row, at.col + (goal->cell.col > at.col ? 1 : -1) });
        plan.push_back({ { agent_name(at), fmt::format("move(box_{}, target_{})", box.color, box.color) } });
    }
    return plan;
}

} // namespace steerbench::tasks::boxnet
