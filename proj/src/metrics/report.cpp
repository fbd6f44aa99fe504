// SPDX-License-Identifier: Apache-2.0
#include <steerbench/metrics/metrics.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

namespace steerbench::metrics
{

namespace
{

    std::string number(double v)
    {
        return fmt::format("{:.1f}", round_half_even(v, 1));
    }

    std::string csv_field(const std::string& s)
    {
        if (s.find_first_of(",\"\r\n") == std::string::npos)
            return s;
        std::string out = "\"";
        for (char c: s)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }

    Report scores(std::span<const RunRecord> records, int turn)
    {
        Report r { { { "model", "task", "method", "turn", "attempts", "success" }, {} }, {} };
        for (const auto& c: success_table(records, turn))
            r.table.rows.push_back({ c.model_id, std::string(tasks::task_name(c.task)),
                                     std::string(steering::method_name(c.method)), std::to_string(c.turn),
                                     std::to_string(c.attempts), number(c.percent) });
        return r;
    }

    Report avenorm(std::span<const RunRecord> records, int turn)
    {
        Report r { { { "model", "method", "tasks", "ave_norm" }, {} }, {} };
        std::set<std::string> models;
        for (const auto& rec: records)
            models.insert(rec.model_id);
        for (const auto& model: models)
        {
            auto panel = score_table(records, model, turn);
            auto norm = ave_norm(panel);
            for (const auto& w: norm.warnings)
                r.warnings.push_back(model + ": " + w);
            auto used = std::to_string(panel.tasks.size() - norm.excluded_tasks.size());
            for (std::size_t j = 0; j < panel.methods.size(); ++j)
                r.table.rows.push_back({ model, panel.methods[j], used, number(norm.scores[j]) });
        }
        return r;
    }

    Report decomposition(std::span<const RunRecord> records, int turn)
    {
        Report r { { { "model", "task", "method", "attempts", "success", "code_correct", "code_wrong", "text_correct",
                       "text_wrong" },
                     {} },
                   {} };
        for (const auto& d: decompose_modality(records, turn))
            r.table.rows.push_back({ d.model_id, std::string(tasks::task_name(d.task)),
                                     std::string(steering::method_name(d.method)), std::to_string(d.attempts),
                                     number(d.success), number(d.code_correct), number(d.code_wrong),
                                     number(d.text_correct), number(d.text_wrong) });
        return r;
    }

    Report usage(std::span<const RunRecord> records, int turn)
    {
        Report r { { { "model", "method", "attempts", "code_usage" }, {} }, {} };
        for (const auto& u: code_usage_ratio(records, turn))
            r.table.rows.push_back({ u.model_id, std::string(steering::method_name(u.method)),
                                     std::to_string(u.attempts), number(u.percent) });
        return r;
    }

    Report cost(std::span<const RunRecord> records)
    {
        Report r { { { "model", "label", "method", "turn", "ave_norm", "avg_tokens", "avg_runtime_ms" }, {} }, {} };
        for (const auto& c: cost_table(records))
            r.table.rows.push_back({ c.model_id, c.label, std::string(steering::method_name(c.method)),
                                     std::to_string(c.turn), number(c.ave_norm), number(c.avg_tokens),
                                     number(c.avg_runtime_ms) });
        return r;
    }

    Report complexity(std::span<const RunRecord> records, int turn)
    {
        Report r { { { "task", "method", "level", "attempts", "success", "code_usage" }, {} }, {} };
        std::map<tasks::TaskKind, std::vector<RunRecord>> by_kind;
        for (const auto& rec: records)
            by_kind[rec.task].push_back(rec);
        for (const auto& [kind, rs]: by_kind)
        {
            std::string task(tasks::task_name(kind));
            if (!tasks::is_procedural(kind))
            {
                r.warnings.push_back(fmt::format("{}: dataset task has no complexity axis, skipped", task));
                continue;
            }
            for (const auto& l: complexity_breakdown(rs, turn))
                r.table.rows.push_back({ task, std::string(steering::method_name(l.method)), l.label,
                                         std::to_string(l.attempts), number(l.success), number(l.code_usage) });
        }
        return r;
    }

} // namespace

std::string to_csv(const Table& table)
{
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row: table.rows)
        line(row);
    return out;
}

std::string to_text(const Table& table)
{
    std::vector<std::size_t> width(table.header.size(), 0);
    auto measure = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], cells[i].size());
    };
    measure(table.header);
    for (const auto& row: table.rows)
        measure(row);

    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        std::string text;
        for (std::size_t i = 0; i < width.size(); ++i)
        {
            const std::string cell = i < cells.size() ? cells[i] : "";
            text += fmt::format("{:<{}}", cell, width[i]);
            if (i + 1 < width.size())
                text += "  ";
        }
        while (!text.empty() && text.back() == ' ')
            text.pop_back();
        out += text + '\n';
    };
    line(table.header);
    std::vector<std::string> rule;
    for (auto w: width)
        rule.emplace_back(w, '-');
    line(rule);
    for (const auto& row: table.rows)
        line(row);
    return out;
}

bool is_report_name(std::string_view name)
{
    return std::find(std::begin(report_names), std::end(report_names), name) != std::end(report_names);
}

Report build_report(std::string_view name, std::span<const RunRecord> records, int turn)
{
    if (name == "scores")
        return scores(records, turn);
    if (name == "avenorm")
        return avenorm(records, turn);
    if (name == "decomposition")
        return decomposition(records, turn);
    if (name == "usage")
        return usage(records, turn);
    if (name == "cost")
        return cost(records);
    if (name == "complexity")
        return complexity(records, turn);
    throw MetricsError(fmt::format("unknown report '{}'; valid reports: scores, avenorm, decomposition, usage, "
                                   "cost, complexity",
                                   name));
}

} // namespace steerbench::metrics
