// SPDX-License-Identifier: Apache-2.0
#include <steerbench/metrics/metrics.hpp>

#include "panels.hpp"
#include "records.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

using namespace steerbench;
using namespace steerbench::metrics;
using steering::MethodId;
using tasks::TaskKind;
using testkit::make_record;
using testkit::RecordSpec;

namespace
{

template<std::size_t N>
ScoreTable table_of(const std::array<testkit::PanelRow, N>& panel)
{
    ScoreTable t;
    for (auto m: steering::all_methods)
        t.methods.emplace_back(steering::method_name(m));
    for (const auto& row: panel)
    {
        t.tasks.emplace_back(row.task);
        t.scores.emplace_back(row.scores.begin(), row.scores.end());
    }
    return t;
}

// Straight transcription of the normalized-average definition, in long double.
std::vector<long double> oracle_ave_norm(const std::vector<std::vector<double>>& s)
{
    std::vector<long double> out(s.at(0).size(), 0.0L);
    std::size_t n = 0;
    for (const auto& row: s)
    {
        long double m = 0;
        for (double v: row)
            m = std::max<long double>(m, v);
        if (m == 0)
            continue;
        ++n;
        for (std::size_t j = 0; j < row.size(); ++j)
            out[j] += row[j] / m;
    }
    for (auto& v: out)
        v = 100.0L * v / n;
    return out;
}

template<std::size_t N>
std::vector<RunRecord> records_of(const std::array<testkit::PanelRow, N>& panel, const std::string& model)
{
    std::vector<RunRecord> out;
    for (const auto& row: panel)
        for (std::size_t j = 0; j < 10; ++j)
        {
            RecordSpec s;
            s.model = model;
            s.task = *tasks::parse_task_kind(row.task);
            s.method = steering::all_methods[j];
            s.instance = std::string(row.task) + "-0";
            s.success = row.scores[j] >= 50.0;
            s.partial = row.scores[j] / 100.0;
            out.push_back(make_record(s));
        }
    return out;
}

} // namespace

TEST_CASE("success rate is the mean partial score")
{
    std::vector<RunRecord> cell;
    for (int i = 0; i < 4; ++i)
        cell.push_back(make_record({ .instance = "i" + std::to_string(i), .success = i != 2 }));
    CHECK(success_rate(cell) == 75.0);

    std::vector<RunRecord> lift { make_record({ .task = TaskKind::BoxLift, .success = true }),
                                  make_record({ .task = TaskKind::BoxLift, .success = false, .partial = 0.5 }) };
    CHECK(success_rate(lift) == 75.0);
    CHECK_THROWS_AS(success_rate(std::span<const RunRecord> {}), EmptyGroup);
}

TEST_CASE("view_at_turn carries the latest attempt forward")
{
    std::vector<RunRecord> rs {
        make_record({ .method = MethodId::AllCode, .turn = 1, .instance = "a", .success = false }),
        make_record({ .method = MethodId::AllCode, .turn = 2, .instance = "a", .success = true }),
        make_record({ .method = MethodId::AllCode, .turn = 1, .instance = "b", .success = false }),
        make_record({ .method = MethodId::CodeTextSum, .turn = 1, .instance = "a", .success = true }),
    };
    CHECK(view_at_turn(rs, 1).size() == 3);
    auto at2 = view_at_turn(rs, 2);
    REQUIRE(at2.size() == 3);
    CHECK(max_turn(rs) == 2);

    auto t1 = success_table(rs, 1);
    auto t4 = success_table(rs, 4);
    REQUIRE(t1.size() == 2);
    CHECK(t1[0].method == MethodId::AllCode);
    CHECK(t1[0].percent == 0.0);
    CHECK(t4[0].percent == 50.0);
    CHECK(t1[1].percent == t4[1].percent);
}

TEST_CASE("ave_norm reproduces the reference panels")
{
    auto a = ave_norm(table_of(testkit::gpt4o_panel));
    auto b = ave_norm(table_of(testkit::gpt4o_mini_panel));
    REQUIRE(a.scores.size() == 10);
    for (std::size_t j = 0; j < 10; ++j)
    {
        CHECK(std::abs(round_half_even(a.scores[j]) - testkit::gpt4o_expected[j]) <= testkit::panel_tolerance);
        CHECK(std::abs(round_half_even(b.scores[j]) - testkit::gpt4o_mini_expected[j]) <= testkit::panel_tolerance);
    }
    CHECK(a.warnings.empty());
}

TEST_CASE("ave_norm agrees with a direct transcription")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial)
    {
        std::size_t tasks = 1 + rng() % 8;
        std::size_t methods = 1 + rng() % 10;
        ScoreTable t;
        for (std::size_t j = 0; j < methods; ++j)
            t.methods.push_back("m" + std::to_string(j));
        for (std::size_t i = 0; i < tasks; ++i)
        {
            t.tasks.push_back("t" + std::to_string(i));
            auto& row = t.scores.emplace_back();
            for (std::size_t j = 0; j < methods; ++j)
                row.push_back(static_cast<double>(rng() % 10001) / 100.0);
            row[rng() % methods] = 1.0 + static_cast<double>(rng() % 99);
        }
        auto got = ave_norm(t);
        auto want = oracle_ave_norm(t.scores);
        for (std::size_t j = 0; j < methods; ++j)
        {
            CHECK(std::abs(got.scores[j] - static_cast<double>(want[j])) < 1e-9);
            CHECK(got.scores[j] > 0.0);
            CHECK(got.scores[j] <= 100.0 + 1e-12);
        }
    }
}

TEST_CASE("ave_norm properties")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial)
    {
        ScoreTable t;
        std::size_t methods = 2 + rng() % 6;
        for (std::size_t j = 0; j < methods; ++j)
            t.methods.push_back("m" + std::to_string(j));
        std::size_t tasks = 1 + rng() % 6;
        std::size_t champion = rng() % methods;
        for (std::size_t i = 0; i < tasks; ++i)
        {
            t.tasks.push_back("t" + std::to_string(i));
            auto& row = t.scores.emplace_back();
            for (std::size_t j = 0; j < methods; ++j)
                row.push_back(static_cast<double>(rng() % 50));
            row[champion] = 50.0 + static_cast<double>(rng() % 50);
        }
        auto base = ave_norm(t);
        CHECK(base.scores[champion] == doctest::Approx(100.0).epsilon(1e-12));

        auto scaled = t;
        std::size_t victim = rng() % tasks;
        double factor = 0.1 + static_cast<double>(rng() % 90) / 100.0;
        for (auto& v: scaled.scores[victim])
            v *= factor;
        auto again = ave_norm(scaled);
        for (std::size_t j = 0; j < methods; ++j)
            CHECK(again.scores[j] == doctest::Approx(base.scores[j]).epsilon(1e-9));
    }

    ScoreTable single { { "a", "b" }, { "only" }, { { 30 }, { 70 } } };
    CHECK(ave_norm(single).scores.at(0) == 100.0);
}

TEST_CASE("ave_norm excludes degenerate and incomplete rows")
{
    ScoreTable t { { "good", "zero", "gap" }, { "x", "y" }, { { 50, 25 }, { 0, 0 }, { 10, std::nan("") } } };
    auto r = ave_norm(t);
    CHECK(r.scores[0] == 100.0);
    CHECK(r.scores[1] == 50.0);
    CHECK(r.excluded_tasks == std::vector<std::string> { "zero", "gap" });
    CHECK(r.warnings.size() == 2);

    ScoreTable dead { { "zero" }, { "x" }, { { 0 } } };
    CHECK_THROWS_AS(ave_norm(dead), DegenerateTask);
    ScoreTable bad { { "t" }, { "x" }, { { 101 } } };
    CHECK_THROWS_AS(ave_norm(bad), MetricsError);
    ScoreTable neg { { "t" }, { "x", "y" }, { { 10, -1 } } };
    CHECK_THROWS_AS(ave_norm(neg), MetricsError);
}

TEST_CASE("round half even")
{
    CHECK(round_half_even(0.25) == 0.2);
    CHECK(round_half_even(0.35) == doctest::Approx(0.4));
    CHECK(round_half_even(80.45) == doctest::Approx(80.4));
    CHECK(round_half_even(2.5, 0) == 2.0);
    CHECK(round_half_even(3.5, 0) == 4.0);
    CHECK(round_half_even(-0.04) == 0.0);
    CHECK_FALSE(std::signbit(round_half_even(-0.04)));
}

TEST_CASE("records feed the panel through success rates")
{
    auto rs = records_of(testkit::gpt4o_panel, "gpt-4o");
    auto extra = records_of(testkit::gpt4o_mini_panel, "gpt-4o-mini");
    rs.insert(rs.end(), extra.begin(), extra.end());
    auto panel = score_table(rs, "gpt-4o", 1);
    CHECK(panel.tasks.size() == 14);
    CHECK(panel.methods.size() == 10);
    auto r = ave_norm(panel);
    for (std::size_t j = 0; j < 10; ++j)
        CHECK(std::abs(round_half_even(r.scores[j]) - testkit::gpt4o_expected[j]) <= testkit::panel_tolerance);

    auto report = build_report("avenorm", rs);
    REQUIRE(report.table.rows.size() == 20);
    for (std::size_t j = 0; j < 20; ++j)
    {
        const auto& row = report.table.rows[j];
        CHECK(row[0] == (j < 10 ? "gpt-4o" : "gpt-4o-mini"));
        CHECK(row[1] == steering::method_name(steering::all_methods[j % 10]));
        CHECK(row[2] == "14");
        double want = j < 10 ? testkit::gpt4o_expected[j] : testkit::gpt4o_mini_expected[j - 10];
        CHECK(std::abs(std::stod(row[3]) - want) <= testkit::panel_tolerance);
    }
}

TEST_CASE("decomposition of the date understanding all code cell")
{
    std::vector<RunRecord> rs;
    for (int i = 0; i < 100; ++i)
        rs.push_back(make_record({ .task = TaskKind::DateUnderstanding,
                                   .instance = "d" + std::to_string(i),
                                   .modality = sandbox::Modality::Code,
                                   .success = i < 64 }));
    auto d = decompose_modality(rs);
    REQUIRE(d.size() == 1);
    CHECK(d[0].success == 64.0);
    CHECK(d[0].code_correct == 64.0);
    CHECK(d[0].code_wrong == 36.0);
    CHECK(d[0].text_correct == 0.0);
    CHECK(d[0].text_wrong == 0.0);
}

TEST_CASE("decomposition bins are a partition")
{
    std::vector<RunRecord> mixed {
        make_record({ .instance = "a", .modality = sandbox::Modality::Code, .success = true }),
        make_record({ .instance = "b", .modality = sandbox::Modality::Text, .success = true }),
        make_record({ .instance = "c", .modality = sandbox::Modality::Text, .success = false }),
        make_record({ .instance = "d", .modality = sandbox::Modality::Text, .success = true }),
    };
    auto d = decompose_modality(mixed).at(0);
    CHECK(d.code_correct == 25.0);
    CHECK(d.code_wrong == 0.0);
    CHECK(d.text_correct == 50.0);
    CHECK(d.text_wrong == 25.0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<RunRecord> rs;
        std::size_t n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i)
            rs.push_back(make_record({ .task = static_cast<TaskKind>(rng() % 3),
                                       .method = steering::all_methods[rng() % 10],
                                       .instance = "i" + std::to_string(i),
                                       .modality = rng() % 2 ? sandbox::Modality::Code : sandbox::Modality::Text,
                                       .success = rng() % 2 == 0 }));
        std::size_t total = 0;
        for (const auto& c: decompose_modality(rs))
        {
            CHECK(c.code_correct + c.code_wrong + c.text_correct + c.text_wrong == doctest::Approx(100.0));
            total += c.attempts;
        }
        CHECK(total == n);
    }

    std::vector<RunRecord> text_only { make_record({ .modality = sandbox::Modality::Text, .success = true }) };
    auto t = decompose_modality(text_only).at(0);
    CHECK(t.text_correct == 100.0);
}

TEST_CASE("code usage ratio")
{
    std::vector<RunRecord> rs;
    for (int i = 0; i < 4; ++i)
    {
        rs.push_back(make_record({ .method = MethodId::AllText, .instance = "i" + std::to_string(i),
                                   .modality = sandbox::Modality::Text }));
        rs.push_back(make_record({ .method = MethodId::AllCode, .instance = "i" + std::to_string(i),
                                   .modality = i == 3 ? sandbox::Modality::Text : sandbox::Modality::Code }));
        rs.push_back(make_record({ .method = MethodId::AllCodeCoT, .instance = "i" + std::to_string(i) }));
    }
    rs.push_back(make_record({ .method = MethodId::AllText, .turn = 2, .instance = "i0" }));
    auto u = code_usage_ratio(rs, 1);
    REQUIRE(u.size() == 3);
    CHECK(u[0].method == MethodId::AllText);
    CHECK(u[0].percent == 0.0);
    CHECK(u[1].percent == 75.0);
    CHECK(u[2].percent == 100.0);
    CHECK(code_usage_ratio(rs, 2)[0].percent == 25.0);
}

TEST_CASE("complexity breakdown orders levels numerically")
{
    std::vector<RunRecord> rs;
    std::vector<std::string> labels { "10_1", "2_2", "1_2", "1_1", "4_4", "2_1", "9_9" };
    for (const auto& l: labels)
        for (int i = 0; i < 2; ++i)
            rs.push_back(make_record({ .method = MethodId::CodeInterpreter, .instance = l + "-" + std::to_string(i),
                                       .success = true, .complexity = l }));
    auto b = complexity_breakdown(rs);
    std::vector<std::string> got;
    for (const auto& l: b)
    {
        got.push_back(l.label);
        CHECK(l.success == 100.0);
        CHECK(l.attempts == 2);
    }
    CHECK(got == std::vector<std::string> { "1_1", "1_2", "2_1", "2_2", "4_4", "9_9", "10_1" });

    std::vector<RunRecord> single { make_record({ .complexity = "3_3" }) };
    CHECK(complexity_breakdown(single).size() == 1);

    auto mixed = rs;
    mixed.push_back(make_record({ .task = TaskKind::Game24, .complexity = "4" }));
    CHECK_THROWS_AS(complexity_breakdown(mixed), MetricsError);
    std::vector<RunRecord> dataset { make_record({ .task = TaskKind::Navigate }) };
    CHECK_THROWS_AS(complexity_breakdown(dataset), MetricsError);
}

TEST_CASE("complexity report splits task kinds and skips datasets")
{
    std::vector<RunRecord> rs {
        make_record({ .task = TaskKind::Game24, .instance = "g", .complexity = "4" }),
        make_record({ .instance = "m", .success = false, .complexity = "2_3" }),
        make_record({ .task = TaskKind::Navigate, .instance = "n" }),
    };
    auto report = build_report("complexity", rs);
    CHECK(to_csv(report.table) == "task,method,level,attempts,success,code_usage\n"
                                  "number_multiply,all_code,2_3,1,0.0,100.0\n"
                                  "game24,all_code,4,1,100.0,100.0\n");
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("navigate") != std::string::npos);
}

TEST_CASE("complexity breakdown on an easy-text hard-code pattern")
{
    // Easy levels answered in text correctly, middle levels in text wrongly, hard levels in code correctly.
    std::vector<RunRecord> rs;
    std::vector<std::pair<std::string, int>> plan { { "1_1", 0 }, { "2_2", 0 }, { "3_3", 1 }, { "4_4", 2 } };
    for (const auto& [label, phase]: plan)
        for (int i = 0; i < 4; ++i)
        {
            bool code = phase == 2 || (phase == 1 && i == 0);
            bool ok = phase == 0 || code;
            rs.push_back(make_record({ .method = MethodId::CodeInterpreter, .instance = label + std::to_string(i),
                                       .modality = code ? sandbox::Modality::Code : sandbox::Modality::Text,
                                       .success = ok, .complexity = label }));
        }
    auto b = complexity_breakdown(rs);
    REQUIRE(b.size() == 4);
    CHECK(b[0].success == 100.0);
    CHECK(b[0].code_usage == 0.0);
    CHECK(b[2].success == 25.0);
    CHECK(b[2].code_usage == 25.0);
    CHECK(b[3].success == 100.0);
    CHECK(b[3].code_usage == 100.0);
    CHECK(b[2].success < b[1].success);
    CHECK(b[2].code_usage > b[1].code_usage);
}

TEST_CASE("cost table")
{
    std::vector<RunRecord> one { make_record({ .tokens = 500, .latency_ms = 7000, .exec_ms = 600 }) };
    auto c = cost_table(one);
    REQUIRE(c.size() == 1);
    CHECK(c[0].avg_tokens == 500.0);
    CHECK(c[0].avg_runtime_ms == 7600.0);
    CHECK(c[0].label == "M3_T1");
    CHECK(c[0].ave_norm == 100.0);

    std::vector<RunRecord> two { make_record({ .instance = "a", .tokens = 400 }),
                                 make_record({ .instance = "b", .tokens = 800 }) };
    CHECK(cost_table(two).at(0).avg_tokens == 600.0);

    std::vector<RunRecord> refined {
        make_record({ .method = MethodId::AllCode, .turn = 1, .instance = "a", .success = false, .tokens = 100 }),
        make_record({ .method = MethodId::AllCode, .turn = 2, .instance = "a", .success = true, .tokens = 250 }),
        make_record({ .method = MethodId::AllCode, .turn = 1, .instance = "b", .success = true, .tokens = 300 }),
        make_record({ .method = MethodId::CodeTextSum, .turn = 1, .instance = "a", .success = true, .tokens = 900 }),
        make_record({ .method = MethodId::CodeTextSum, .turn = 1, .instance = "b", .success = true, .tokens = 700 }),
    };
    auto rows = cost_table(refined);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == "M3_T1");
    CHECK(rows[0].avg_tokens == 200.0);
    CHECK(rows[0].ave_norm == 50.0);
    CHECK(rows[1].label == "M3_T2");
    CHECK(rows[1].avg_tokens == 275.0);
    CHECK(rows[1].ave_norm == 100.0);
    CHECK(rows[2].label == "M9_T1");
    CHECK(rows[2].avg_tokens == 800.0);

    auto table = build_report("cost", refined).table;
    CHECK(table.header ==
          std::vector<std::string> { "model", "label", "method", "turn", "ave_norm", "avg_tokens", "avg_runtime_ms" });
    CHECK(table.rows[1] ==
          std::vector<std::string> { "model-a", "M3_T2", "all_code", "2", "100.0", "275.0", "1000.0" });
}

TEST_CASE("record json round trip and file loading")
{
    auto r = make_record({ .task = TaskKind::Game24, .method = MethodId::SelfEstimateScore, .turn = 1,
                           .instance = "g-1", .complexity = "4" });
    r.attempt.coding_score = 7;
    auto j = to_json(r);
    CHECK(j["key"] == "g-1|self_estimate_score|1|cfg");
    auto back = record_from_json(j);
    CHECK(to_json(back).dump() == j.dump());

    auto bad_key = j;
    bad_key["key"] = "other";
    CHECK_THROWS_AS(record_from_json(bad_key), InvalidRecord);
    auto bad_task = j;
    bad_task["task"] = "chess";
    CHECK_THROWS_AS(record_from_json(bad_task), InvalidRecord);

    auto path = std::filesystem::temp_directory_path() / ("steerbench-records-" + std::to_string(::getpid()));
    {
        std::ofstream out(path);
        out << j.dump() << "\n\n" << j.dump() << "\n";
    }
    CHECK(load_records(path).size() == 2);
    {
        std::ofstream out(path, std::ios::app);
        out << "{not json\n";
    }
    try
    {
        load_records(path);
        FAIL("expected InvalidRecord");
    }
    catch (const InvalidRecord& e)
    {
        CHECK(std::string(e.what()).find(":4:") != std::string::npos);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_records(path), InvalidRecord);
}

TEST_CASE("report tables")
{
    CHECK(is_report_name("usage"));
    CHECK_FALSE(is_report_name("plots"));
    try
    {
        build_report("plots", {});
        FAIL("expected MetricsError");
    }
    catch (const MetricsError& e)
    {
        CHECK(std::string(e.what()).find("scores, avenorm, decomposition, usage, cost, complexity") !=
              std::string::npos);
    }

    Table t { { "a", "long header" }, { { "x,y", "1" }, { "say \"hi\"", "22" } } };
    CHECK(to_csv(t) == "a,long header\n\"x,y\",1\n\"say \"\"hi\"\"\",22\n");
    CHECK(to_text(t) == "a         long header\n--------  -----------\nx,y       1\nsay \"hi\"  22\n");

    std::vector<RunRecord> rs { make_record({ .instance = "b", .complexity = "2_2" }),
                                make_record({ .instance = "a", .success = false, .complexity = "2_2" }) };
    auto shuffled = rs;
    std::swap(shuffled[0], shuffled[1]);
    for (auto name: report_names)
    {
        CHECK(to_csv(build_report(name, rs).table) == to_csv(build_report(name, shuffled).table));
    }
    CHECK(to_csv(build_report("scores", rs).table) ==
          "model,task,method,turn,attempts,success\nmodel-a,number_multiply,all_code,1,2,50.0\n");
}
