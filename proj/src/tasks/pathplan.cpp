// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/pathplan.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <deque>

namespace steerbench::tasks::pathplan
{

std::optional<std::vector<Cell>> shortest_path(const PathPlanPayload& grid)
{
    auto n = grid.side;
    auto inside = [&](Cell c) { return c.row >= 0 && c.col >= 0 && c.row < n && c.col < n; };
    auto index = [&](Cell c) { return static_cast<std::size_t>(c.row * n + c.col); };
    if (!inside(grid.start) || !inside(grid.goal))
        return std::nullopt;

    std::vector<bool> blocked(static_cast<std::size_t>(n * n), false);
    for (auto c: grid.obstacles)
        if (inside(c))
            blocked[index(c)] = true;
    if (blocked[index(grid.start)] || blocked[index(grid.goal)])
        return std::nullopt;

    std::vector<int> parent(static_cast<std::size_t>(n * n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n * n), false);
    std::deque<Cell> queue { grid.start };
    seen[index(grid.start)] = true;
    constexpr Cell moves[] = { { -1, 0 }, { 1, 0 }, { 0, -1 }, { 0, 1 } };
    while (!queue.empty())
    {
        Cell c = queue.front();
        queue.pop_front();
        if (c == grid.goal)
        {
            std::vector<Cell> path;
            for (int at = static_cast<int>(index(c)); at != -1; at = parent[static_cast<std::size_t>(at)])
                path.push_back({ at / n, at % n });
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (auto m: moves)
        {
            Cell next { c.row + m.row, c.col + m.col };
            if (!inside(next) || blocked[index(next)] || seen[index(next)])
                continue;
            seen[index(next)] = true;
            parent[index(next)] = static_cast<int>(index(c));
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

std::string format_path(const std::vector<Cell>& path)
{
    std::string out = "[";
    for (std::size_t i = 0; i < path.size(); ++i)
    {
        if (i > 0)
            out += ", ";
        out += fmt::format("({}, {})", path[i].row, path[i].col);
    }
    return out + "]";
}

} // namespace steerbench::tasks::pathplan
