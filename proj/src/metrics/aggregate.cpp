// SPDX-License-Identifier: Apache-2.0
#include <steerbench/metrics/metrics.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace steerbench::metrics
{

namespace
{

    using Cell = std::tuple<std::string, tasks::TaskKind, steering::MethodId>;

    template<class Key, class F>
    std::map<Key, std::vector<RunRecord>> group(std::span<const RunRecord> records, F key_of)
    {
        std::map<Key, std::vector<RunRecord>> out;
        for (const auto& r: records)
            out[key_of(r)].push_back(r);
        return out;
    }

    double percent_of(std::size_t n, std::size_t total)
    {
        return total == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total);
    }

} // namespace

std::vector<RunRecord> view_at_turn(std::span<const RunRecord> records, int turn)
{
    using Key = std::tuple<std::string, std::string, std::string, steering::MethodId>;
    std::map<Key, const RunRecord*> latest;
    for (const auto& r: records)
    {
        if (r.attempt.turn > turn)
            continue;
        Key k { r.model_id, r.config_hash, r.attempt.instance_id, r.attempt.method };
        auto& slot = latest[k];
        if (!slot || slot->attempt.turn < r.attempt.turn)
            slot = &r;
    }
    std::vector<RunRecord> out;
    out.reserve(latest.size());
    for (const auto& [k, r]: latest)
        out.push_back(*r);
    return out;
}

int max_turn(std::span<const RunRecord> records)
{
    int t = 0;
    for (const auto& r: records)
        t = std::max(t, r.attempt.turn);
    return t;
}

double success_rate(std::span<const RunRecord> cell)
{
    if (cell.empty())
        throw EmptyGroup("success rate of an empty group");
    double sum = 0.0;
    for (const auto& r: cell)
        sum += r.attempt.verdict.partial_score;
    return 100.0 * sum / static_cast<double>(cell.size());
}

std::vector<SuccessCell> success_table(std::span<const RunRecord> records, int turn)
{
    auto view = view_at_turn(records, turn);
    auto cells = group<Cell>(view, [](const RunRecord& r) {
        return Cell { r.model_id, r.task, r.attempt.method };
    });
    std::vector<SuccessCell> out;
    for (const auto& [k, rs]: cells)
        out.push_back({ std::get<0>(k), std::get<1>(k), std::get<2>(k), turn, rs.size(), success_rate(rs) });
    return out;
}

double round_half_even(double value, int decimals)
{
    double scale = std::pow(10.0, decimals);
    int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    double r = std::nearbyint(value * scale) / scale;
    std::fesetround(saved);
    return r == 0.0 ? 0.0 : r;
}

AveNorm ave_norm(const ScoreTable& table)
{
    if (table.scores.size() != table.tasks.size())
        throw MetricsError("score table has mismatched task labels");
    AveNorm out;
    out.scores.assign(table.methods.size(), 0.0);
    std::size_t used = 0;
    for (std::size_t i = 0; i < table.scores.size(); ++i)
    {
        const auto& row = table.scores[i];
        if (row.size() != table.methods.size())
            throw MetricsError(fmt::format("task {} has {} scores for {} methods", table.tasks[i], row.size(),
                                           table.methods.size()));
        double best = 0.0;
        std::optional<std::size_t> missing;
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            if (std::isnan(row[j]))
            {
                missing = missing.value_or(j);
                continue;
            }
            if (!std::isfinite(row[j]) || row[j] < 0.0 || row[j] > 100.0)
                throw MetricsError(fmt::format("score {} for task {} method {} is outside [0, 100]", row[j],
                                               table.tasks[i], table.methods[j]));
            best = std::max(best, row[j]);
        }
        if (missing)
        {
            out.excluded_tasks.push_back(table.tasks[i]);
            out.warnings.push_back(
                fmt::format("task {} has no score for method {}; excluded", table.tasks[i], table.methods[*missing]));
            continue;
        }
        if (best == 0.0)
        {
            out.excluded_tasks.push_back(table.tasks[i]);
            out.warnings.push_back(fmt::format("task {} scores zero for every method; excluded", table.tasks[i]));
            continue;
        }
        for (std::size_t j = 0; j < row.size(); ++j)
            out.scores[j] += row[j] / best;
        ++used;
    }
    if (used == 0)
        throw DegenerateTask("no task row has a positive score for any method");
    for (auto& s: out.scores)
        s = 100.0 * s / static_cast<double>(used);
    return out;
}

ScoreTable score_table(std::span<const RunRecord> records, const std::string& model_id, int turn)
{
    std::set<tasks::TaskKind> kinds;
    std::set<steering::MethodId> methods;
    std::map<std::pair<tasks::TaskKind, steering::MethodId>, double> cells;
    for (const auto& c: success_table(records, turn))
    {
        if (c.model_id != model_id)
            continue;
        kinds.insert(c.task);
        methods.insert(c.method);
        cells[{ c.task, c.method }] = c.percent;
    }
    ScoreTable t;
    for (auto m: methods)
        t.methods.emplace_back(steering::method_name(m));
    for (auto k: kinds)
    {
        t.tasks.emplace_back(tasks::task_name(k));
        auto& row = t.scores.emplace_back();
        for (auto m: methods)
        {
            auto it = cells.find({ k, m });
            row.push_back(it == cells.end() ? std::nan("") : it->second);
        }
    }
    return t;
}

std::vector<Decomposition> decompose_modality(std::span<const RunRecord> records, int turn)
{
    auto view = view_at_turn(records, turn);
    auto cells = group<Cell>(view, [](const RunRecord& r) {
        return Cell { r.model_id, r.task, r.attempt.method };
    });
    std::vector<Decomposition> out;
    for (const auto& [k, rs]: cells)
    {
        std::size_t bins[4] = {};
        for (const auto& r: rs)
        {
            bool code = r.attempt.modality == sandbox::Modality::Code;
            bool ok = r.attempt.verdict.success;
            ++bins[(code ? 0 : 2) + (ok ? 0 : 1)];
        }
        out.push_back({ std::get<0>(k), std::get<1>(k), std::get<2>(k), rs.size(), success_rate(rs),
                        percent_of(bins[0], rs.size()), percent_of(bins[1], rs.size()),
                        percent_of(bins[2], rs.size()), percent_of(bins[3], rs.size()) });
    }
    return out;
}

std::vector<UsageCell> code_usage_ratio(std::span<const RunRecord> records, int turn)
{
    using Key = std::pair<std::string, steering::MethodId>;
    auto view = view_at_turn(records, turn);
    auto cells = group<Key>(view, [](const RunRecord& r) { return Key { r.model_id, r.attempt.method }; });
    std::vector<UsageCell> out;
    for (const auto& [k, rs]: cells)
    {
        auto code = std::count_if(rs.begin(), rs.end(),
                                  [](const RunRecord& r) { return r.attempt.modality == sandbox::Modality::Code; });
        out.push_back({ k.first, k.second, rs.size(), percent_of(static_cast<std::size_t>(code), rs.size()) });
    }
    return out;
}

std::vector<ComplexityLevel> complexity_breakdown(std::span<const RunRecord> records, int turn)
{
    if (records.empty())
        return {};
    tasks::TaskKind kind = records.front().task;
    for (const auto& r: records)
        if (r.task != kind)
            throw MetricsError(fmt::format("complexity breakdown needs one task kind, got {} and {}",
                                           tasks::task_name(kind), tasks::task_name(r.task)));
    if (!tasks::is_procedural(kind))
        throw MetricsError(fmt::format("task {} has no complexity axis", tasks::task_name(kind)));

    using Key = std::tuple<steering::MethodId, std::vector<int>, std::string>;
    auto view = view_at_turn(records, turn);
    auto cells = group<Key>(view, [kind](const RunRecord& r) {
        return Key { r.attempt.method, tasks::complexity_key(tasks::parse_complexity(kind, r.complexity)),
                     r.complexity };
    });
    std::vector<ComplexityLevel> out;
    for (const auto& [k, rs]: cells)
    {
        auto code = std::count_if(rs.begin(), rs.end(),
                                  [](const RunRecord& r) { return r.attempt.modality == sandbox::Modality::Code; });
        out.push_back({ std::get<0>(k), std::get<2>(k), std::get<1>(k), rs.size(), success_rate(rs),
                        percent_of(static_cast<std::size_t>(code), rs.size()) });
    }
    return out;
}

std::vector<CostRow> cost_table(std::span<const RunRecord> records)
{
    std::vector<CostRow> out;
    auto by_model = group<std::string>(records, [](const RunRecord& r) { return r.model_id; });
    for (const auto& [model, model_records]: by_model)
    {
        auto by_method =
            group<steering::MethodId>(model_records, [](const RunRecord& r) { return r.attempt.method; });
        ScoreTable panel;
        std::set<tasks::TaskKind> kinds;
        for (const auto& r: model_records)
            kinds.insert(r.task);
        for (auto k: kinds)
            panel.tasks.emplace_back(tasks::task_name(k));
        panel.scores.resize(kinds.size());

        std::size_t first = out.size();
        for (const auto& [method, method_records]: by_method)
        {
            for (int t = 1; t <= max_turn(method_records); ++t)
            {
                auto view = view_at_turn(method_records, t);
                CostRow row { model, method, t, fmt::format("M{}_T{}", steering::method_number(method), t),
                              view.size() };
                double tokens = 0.0;
                double runtime = 0.0;
                for (const auto& r: view)
                {
                    tokens += static_cast<double>(r.attempt.cost.tokens);
                    runtime += static_cast<double>(r.attempt.cost.latency_ms + r.attempt.cost.exec_ms);
                }
                row.avg_tokens = tokens / static_cast<double>(view.size());
                row.avg_runtime_ms = runtime / static_cast<double>(view.size());
                out.push_back(row);

                panel.methods.push_back(row.label);
                auto by_task = group<tasks::TaskKind>(view, [](const RunRecord& r) { return r.task; });
                std::size_t i = 0;
                for (auto k: kinds)
                {
                    auto it = by_task.find(k);
                    panel.scores[i++].push_back(it == by_task.end() ? std::nan("") : success_rate(it->second));
                }
            }
        }
        try
        {
            auto norm = ave_norm(panel);
            for (std::size_t j = 0; j < norm.scores.size(); ++j)
                out[first + j].ave_norm = norm.scores[j];
        }
        catch (const DegenerateTask&)
        {
        }
    }
    return out;
}

} // namespace steerbench::metrics
