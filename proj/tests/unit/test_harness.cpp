// SPDX-License-Identifier: Apache-2.0
#include <steerbench/harness/harness.hpp>

#include "scripted.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>

using namespace steerbench;
using namespace steerbench::harness;

namespace
{

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / fmt::format("steerbench-harness-{}-{}", ::getpid(), name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string basic_ini(const std::filesystem::path& out, const std::string& mode = "replay",
                      const std::string& methods = "only_question,all_code,code_text_sum", int trials = 3)
{
    return fmt::format(R"([run]
model_id = scripted
methods = {}
seed = 7
max_turns = 2
parallelism = 2
mode = {}
output_dir = {}
assets_dir = {}

[store]
path = store.jsonl

[task.number_multiply]
complexity = 2_2
trials = {}
)",
                       methods, mode, out.string(), STEERBENCH_ASSETS_DIR, trials);
}

// Code on request, otherwise a text answer that is right only for even seeds.
std::shared_ptr<testkit::ScriptedModel> multiply_model(const RunConfig& config)
{
    auto instances = std::make_shared<std::vector<tasks::TaskInstance>>(plan_instances(config));
    return std::make_shared<testkit::ScriptedModel>([instances](const llm::ChatRequest& r) -> std::string {
        for (const auto& inst: *instances)
        {
            if (r.messages.front().content.find(inst.prompt) == std::string::npos)
                continue;
            const auto& p = std::get<tasks::MultiplyPayload>(inst.payload);
            if (r.messages.front().content.rfind("Use code", 0) == 0)
                return testkit::fence(fmt::format("print({} * {})\n", p.lhs.str(), p.rhs.str()));
            if (r.messages.size() > 1 || r.messages.front().content.find("Answer from the code agent") != std::string::npos)
                return "Still " + tasks::reference_answer(inst) + ". TERMINATE";
            bool right = inst.seed % 2 == 0;
            return "It is " + expr::BigInt(p.lhs * p.rhs + (right ? 0 : 1)).str();
        }
        return "unknown";
    });
}

std::vector<std::string> sorted_lines(const std::filesystem::path& file)
{
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            lines.push_back(line);
    std::sort(lines.begin(), lines.end());
    return lines;
}

void expect_config_error(const std::string& ini, const std::string& field)
{
    try
    {
        parse_config(ini, std::filesystem::temp_directory_path());
        FAIL("expected ConfigError for " << field);
    }
    catch (const ConfigError& e)
    {
        CHECK(e.field() == field);
    }
}

// Records the scripted model into <dir>/store.jsonl and returns the replay config.
RunConfig recorded(const std::filesystem::path& dir)
{
    auto config = parse_config(basic_ini(dir / "record"), dir);
    config.mode = llm::SessionMode::Record;
    RunHooks hooks;
    hooks.provider = multiply_model(config);
    auto s = run(config, hooks);
    REQUIRE(s.errors.empty());
    config.mode = llm::SessionMode::Replay;
    return config;
}

} // namespace

TEST_CASE("config parsing with defaults")
{
    auto dir = scratch("parse");
    auto c = parse_config(basic_ini("out"), dir);
    CHECK(c.model_id == "scripted");
    CHECK(c.methods ==
          std::vector { steering::MethodId::OnlyQuestion, steering::MethodId::AllCode, steering::MethodId::CodeTextSum });
    CHECK(c.seed == 7);
    CHECK(c.max_turns == 2);
    CHECK(c.max_tool_turns == 5);
    CHECK(c.parallelism == 2);
    CHECK(c.mode == llm::SessionMode::Replay);
    CHECK(c.output_dir == dir / "out");
    CHECK(c.store == dir / "store.jsonl");
    CHECK(c.sandbox.limits.timeout_s == 30.0);
    CHECK(c.sandbox.limits.output_cap == 64 * 1024);
    CHECK(c.provider.base_url == "https://api.openai.com");
    REQUIRE(c.tasks.size() == 1);
    CHECK(c.tasks[0].kind == tasks::TaskKind::NumberMultiply);
    CHECK(tasks::complexity_label(c.tasks[0].complexity) == "2_2");
    CHECK(c.tasks[0].trials == 3);

    auto all = parse_config(basic_ini("out", "live", "all") + "\n[sandbox]\nshim = python3 shim.py --strict\n"
                                                               "timeout_s = 2\n[provider]\nsystem_prompt = no\n",
                            dir);
    CHECK(all.methods.size() == 10);
    CHECK(all.sandbox.shim == std::vector<std::string> { "python3", "shim.py", "--strict" });
    CHECK(all.sandbox.limits.timeout_s == 2.0);
    CHECK_FALSE(effective_capabilities(all).system_prompt);
    CHECK(parse_config(basic_ini("out", "replay", "3,9,3"), dir).methods.size() == 2);
}

TEST_CASE("config errors name the field")
{
    auto ini = basic_ini("out");
    auto replace = [&](const std::string& from, const std::string& to) {
        auto s = ini;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    expect_config_error(replace("model_id = scripted\n", ""), "run.model_id");
    expect_config_error(replace("trials = 3", "trials = 0"), "task.number_multiply.trials");
    expect_config_error(replace("trials = 3", "trials = many"), "task.number_multiply.trials");
    expect_config_error(replace("complexity = 2_2", "complexity = 2"), "task.number_multiply.complexity");
    expect_config_error(replace("complexity = 2_2\n", ""), "task.number_multiply.complexity");
    expect_config_error(replace("mode = replay", "mode = dream"), "run.mode");
    expect_config_error(replace("parallelism = 2", "parallelism = 0"), "run.parallelism");
    expect_config_error(replace("methods = only_question", "methods = best"), "run.methods");
    expect_config_error(replace("seed = 7", "seeds = 7"), "run.seeds");
    expect_config_error(replace("[store]\npath = store.jsonl\n", ""), "store.path");
    expect_config_error(ini + "\n[extras]\nx = 1\n", "extras");
    expect_config_error(ini + "\n[task.chess]\ntrials = 1\n", "task.chess.kind");
    expect_config_error(ini + "\n[task.navigate]\ntrials = 1\n", "task.navigate.dataset");
    expect_config_error(replace("[task.number_multiply]", "[task.nm]"), "task.nm.kind");
    expect_config_error("[run\nmodel_id = x\n", "<file>");
    CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("config hash ignores scheduling and locations")
{
    auto dir = scratch("hash");
    auto a = parse_config(basic_ini("out"), dir);
    auto b = a;
    b.parallelism = 16;
    b.output_dir = "/elsewhere";
    b.mode = llm::SessionMode::Record;
    b.store = "/other/store.jsonl";
    b.sandbox.interpreter = "/usr/bin/python3.11";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);

    auto c = a;
    c.seed = 8;
    CHECK(config_hash(a) != config_hash(c));
    auto d = a;
    d.methods.pop_back();
    CHECK(config_hash(a) != config_hash(d));
    auto e = a;
    e.autogen_asset = "camel_system";
    CHECK(config_hash(a) != config_hash(e));
    auto f = a;
    f.sandbox.limits.timeout_s = 2;
    CHECK(config_hash(a) != config_hash(f));
}

TEST_CASE("complexity axis specs")
{
    auto grid = parse_axis(tasks::TaskKind::NumberMultiply, "1_1..2_3");
    std::vector<std::string> labels;
    for (const auto& c: grid)
        labels.push_back(tasks::complexity_label(c));
    CHECK(labels == std::vector<std::string> { "1_1", "1_2", "1_3", "2_1", "2_2", "2_3" });
    CHECK(parse_axis(tasks::TaskKind::Game24, "2..8").size() == 7);
    CHECK(parse_axis(tasks::TaskKind::Game24, "3").size() == 1);
    CHECK(parse_axis(tasks::TaskKind::NumberMultiply, "1_1, 4_4").size() == 2);
    CHECK(parse_axis(tasks::TaskKind::NumberMultiply, "1_1..8_8").size() == 64);
    CHECK_THROWS_AS(parse_axis(tasks::TaskKind::Game24, "5..2"), ConfigError);
    CHECK_THROWS_AS(parse_axis(tasks::TaskKind::Game24, "x"), ConfigError);
    CHECK_THROWS_AS(parse_axis(tasks::TaskKind::Navigate, "1"), ConfigError);
    CHECK_THROWS_AS(parse_axis(tasks::TaskKind::Game24, ""), ConfigError);
}

TEST_CASE("instance planning")
{
    auto dir = scratch("plan");
    auto c = parse_config(basic_ini("out"), dir);
    auto a = plan_instances(c);
    auto b = plan_instances(c);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].prompt == b[i].prompt);
        CHECK(a[i].seed == 7 + i);
    }

    {
        std::ofstream out(dir / "nav.jsonl");
        for (int i = 0; i < 5; ++i)
            out << fmt::format(R"({{"question": "Do you return? {}", "answer": "Yes", "options": ["Yes", "No"]}})", i)
                << "\n";
    }
    c.tasks.push_back({ tasks::TaskKind::Navigate, std::monostate {}, 2, dir / "nav.jsonl" });
    auto mixed = plan_instances(c);
    CHECK(mixed.size() == 5);
    CHECK(mixed.back().kind == tasks::TaskKind::Navigate);
}

TEST_CASE("run writes records, a manifest and a summary")
{
    auto dir = scratch("run");
    auto config = parse_config(basic_ini(dir / "out", "live"), dir);
    RunHooks hooks;
    hooks.provider = multiply_model(config);
    auto s = run(config, hooks);
    CHECK(s.errors.empty());
    CHECK(s.jobs == 9);
    CHECK(s.executed == 9);
    CHECK(s.skipped == 0);
    // only_question: seed 7 wrong then fixed at turn 2, seeds 8 and 9 two turns each as well.
    CHECK(s.records_written == 3 * 2 + 3 * 2 + 3);
    CHECK(s.failures == 0);
    CHECK(s.exit_code() == 0);

    auto hash = config_hash(config);
    std::ifstream in(config.output_dir / records_file_name);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        auto j = nlohmann::json::parse(line);
        std::set<std::string> keys;
        for (const auto& [k, v]: j.items())
            keys.insert(k);
        CHECK(keys == std::set<std::string> { "attempt", "complexity", "config_hash", "key", "model_id", "task" });
        CHECK(j["config_hash"] == hash);
        CHECK(line.find("started_at") == std::string::npos);
        CHECK_NOTHROW(metrics::record_from_json(j));
        ++n;
    }
    CHECK(n == s.records_written);

    std::ifstream mf(config.output_dir / manifest_file_name);
    auto manifest = nlohmann::json::parse(mf);
    CHECK(manifest["config_hash"] == hash);
    CHECK(manifest["started_at"].get<std::string>().size() == 20);
    CHECK(manifest["summary"]["jobs"] == 9);

    auto text = format_summary(s);
    CHECK(text.find("jobs: 9 (executed 9, skipped 0)") != std::string::npos);

    auto again = run(config, hooks);
    CHECK(again.executed == 0);
    CHECK(again.skipped == 9);
    CHECK(again.records_written == 0);
}

TEST_CASE("task failures give exit code 1")
{
    auto dir = scratch("fail");
    auto ini = basic_ini(dir / "out", "live", "all_text");
    ini.replace(ini.find("max_turns = 2"), 13, "max_turns = 1");
    auto config = parse_config(ini, dir);
    RunHooks hooks;
    hooks.provider = multiply_model(config);
    auto s = run(config, hooks);
    CHECK(s.failures == 2);
    CHECK(s.successes == 1);
    CHECK(s.failures_by_reason.at("WrongValue") == 2);
    CHECK(s.exit_code() == 1);
}

TEST_CASE("resume re-executes only missing attempts")
{
    auto dir = scratch("resume");
    auto config = recorded(dir);
    config.output_dir = dir / "replay";
    auto first = run(config);
    REQUIRE(first.errors.empty());
    auto file = config.output_dir / records_file_name;
    auto complete = sorted_lines(file);

    std::vector<std::string> kept;
    for (std::size_t i = 0; i < complete.size(); ++i)
        if (i % 2 == 0)
            kept.push_back(complete[i]);
    {
        std::ofstream out(file, std::ios::trunc);
        for (const auto& l: kept)
            out << l << "\n";
    }
    auto second = run(config);
    CHECK(second.errors.empty());
    CHECK(second.executed > 0);
    CHECK(second.executed < second.jobs);
    CHECK(second.records_written == complete.size() - kept.size());
    CHECK(sorted_lines(file) == complete);

    auto third = run(config);
    CHECK(third.executed == 0);
}

TEST_CASE("replay is identical across parallelism")
{
    auto dir = scratch("parallel");
    auto config = recorded(dir);
    std::vector<std::vector<std::string>> outputs;
    for (int p: { 1, 8, 3 })
    {
        config.parallelism = p;
        config.output_dir = dir / fmt::format("p{}", p);
        auto s = run(config);
        CHECK(s.errors.empty());
        outputs.push_back(sorted_lines(config.output_dir / records_file_name));
        for (auto name: metrics::report_names)
            if (name != "complexity")
                write_report(config.output_dir, std::string(name), config.output_dir / "reports");
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
    for (auto name: { "scores", "avenorm", "decomposition", "usage", "cost" })
    {
        auto read = [&](int p) {
            std::ifstream in(dir / fmt::format("p{}", p) / "reports" / (std::string(name) + ".csv"));
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        CHECK(read(1) == read(8));
        CHECK_FALSE(read(1).empty());
    }
}

TEST_CASE("infrastructure errors give exit code 2")
{
    auto dir = scratch("infra");
    auto config = parse_config(basic_ini(dir / "out"), dir);
    auto s = run(config);
    CHECK(s.errors.size() == 9);
    CHECK(s.errors[0].find("not in replay store") != std::string::npos);
    CHECK(s.exit_code() == 2);
    auto written = config.output_dir / records_file_name;
    bool empty = !std::filesystem::exists(written) || std::filesystem::file_size(written) == 0;
    CHECK(empty);

    ::unsetenv("STEERBENCH_API_KEY_NOBODY");
    auto live = config;
    live.mode = llm::SessionMode::Live;
    live.provider.name = "nobody";
    live.output_dir = dir / "live";
    auto l = run(live);
    REQUIRE(l.errors.size() == 1);
    CHECK(l.errors[0].find("STEERBENCH_API_KEY_NOBODY") != std::string::npos);
    CHECK(l.exit_code() == 2);

    auto bad_assets = config;
    bad_assets.assets_dir = "/nonexistent";
    CHECK_THROWS_AS(run(bad_assets), ConfigError);
}

TEST_CASE("reports from a run directory")
{
    auto dir = scratch("report");
    CHECK_THROWS_AS(read_records(dir), NoRecords);
    std::ofstream(dir / records_file_name).flush();
    CHECK_THROWS_AS(read_records(dir), NoRecords);

    auto config = parse_config(basic_ini(dir / "out", "live"), dir);
    RunHooks hooks;
    hooks.provider = multiply_model(config);
    run(config, hooks);
    auto report = write_report(config.output_dir, "usage", dir / "csv");
    CHECK(std::filesystem::exists(dir / "csv" / "usage.csv"));
    CHECK(report.table.rows.size() == 3);
    CHECK_THROWS_AS(write_report(config.output_dir, "plots", dir / "csv"), metrics::MetricsError);
    auto complexity = write_report(config.output_dir, "complexity", dir / "csv");
    CHECK(complexity.table.rows.size() == 3);
    CHECK(complexity.table.rows[0][0] == "number_multiply");
    CHECK(complexity.table.rows[0][2] == "2_2");
}
