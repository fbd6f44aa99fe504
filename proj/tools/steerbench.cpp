// SPDX-License-Identifier: Apache-2.0
#include <steerbench/harness/harness.hpp>
#include <steerbench/tasks/generate.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

using namespace steerbench;

namespace
{

constexpr int exit_infrastructure = 2;

int run_command(const std::string& config_path, std::optional<int> parallelism, std::optional<std::string> mode,
                const std::string& out)
{
    auto config = harness::load_config(config_path);
    if (!out.empty())
        config.output_dir = out;
    if (parallelism)
        config.parallelism = *parallelism;
    if (mode)
    {
        auto m = llm::parse_mode(*mode);
        if (!m)
            throw harness::ConfigError("run.mode", fmt::format("'{}' is not one of live, record, replay", *mode));
        config.mode = *m;
    }
    auto summary = harness::run(config);
    std::cout << format_summary(summary);
    return summary.exit_code();
}

int report_command(const std::string& records, const std::string& which, int turn, std::string out)
{
    if (out.empty())
        out = (std::filesystem::path(records) / "reports").string();
    auto report = harness::write_report(records, which, out, turn);
    for (const auto& w: report.warnings)
        std::cerr << "warning: " << w << "\n";
    std::cout << metrics::to_text(report.table);
    return 0;
}

int sweep_command(const std::string& config_path, const std::string& kind_name, const std::string& axis, int trials,
                  const std::string& method_name, std::string out)
{
    auto config = harness::load_config(config_path);
    auto kind = tasks::parse_task_kind(kind_name);
    if (!kind)
        throw harness::ConfigError("kind", fmt::format("unknown task kind '{}'", kind_name));
    auto method = steering::parse_method(method_name);
    if (!method)
        throw harness::ConfigError("method", fmt::format("unknown method '{}'", method_name));

    config = harness::sweep_config(config, *kind, axis, trials, *method);
    if (!out.empty())
        config.output_dir = out;

    auto summary = harness::run(config);
    std::cout << format_summary(summary);
    if (summary.exit_code() == exit_infrastructure)
        return exit_infrastructure;

    // Breakdown over this sweep's records only; the directory may hold other configs.
    auto hash = harness::config_hash(config);
    std::vector<metrics::RunRecord> mine;
    for (auto& r: harness::read_records(config.output_dir))
        if (r.config_hash == hash)
            mine.push_back(std::move(r));
    auto report = metrics::build_report("complexity", mine);
    auto reports = config.output_dir / "reports";
    std::filesystem::create_directories(reports);
    std::ofstream(reports / "complexity.csv", std::ios::trunc | std::ios::binary) << metrics::to_csv(report.table);
    std::cout << metrics::to_text(report.table);
    return summary.exit_code();
}

int gen_command(const std::string& kind_name, const std::string& complexity, std::uint64_t seed)
{
    auto kind = tasks::parse_task_kind(kind_name);
    if (!kind)
        throw harness::ConfigError("kind", fmt::format("unknown task kind '{}'", kind_name));
    auto instance = tasks::generate(*kind, tasks::parse_complexity(*kind, complexity), seed);
    std::cout << tasks::to_json(instance).dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Steering benchmark harness: run, report, sweep, gen" };
    app.require_subcommand(1);

    std::vector<std::string> kinds;
    for (auto k: tasks::all_task_kinds)
        kinds.emplace_back(tasks::task_name(k));
    std::vector<std::string> reports(std::begin(metrics::report_names), std::end(metrics::report_names));

    auto* run = app.add_subcommand("run", "Run every configured (instance, method) attempt");
    std::string config_path;
    std::optional<int> parallelism;
    std::optional<std::string> mode;
    run->add_option("--config", config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
    run->add_option("--parallelism", parallelism, "Override run.parallelism")->check(CLI::PositiveNumber);
    run->add_option("--mode", mode, "Override run.mode")->check(CLI::IsMember({ "live", "record", "replay" }));
    std::string run_out;
    run->add_option("--out", run_out, "Override run.output_dir");

    auto* report = app.add_subcommand("report", "Aggregate records into a table");
    std::string records_dir;
    std::string which;
    std::string report_out;
    int turn = 1;
    report->add_option("--records", records_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("--which", which, "Report name")->required()->check(CLI::IsMember(reports));
    report->add_option("--turn", turn, "Refinement turn to report")->check(CLI::PositiveNumber);
    report->add_option("--out", report_out, "CSV directory (default <records>/reports)");

    auto* sweep = app.add_subcommand("sweep", "Run one method over a complexity grid");
    std::string sweep_config;
    std::string kind;
    std::string axis;
    int trials = 100;
    std::string method;
    std::string sweep_out;
    sweep->add_option("--config", sweep_config, "Base INI configuration")->required()->check(CLI::ExistingFile);
    sweep->add_option("--kind", kind, "Procedural task kind")->required()->check(CLI::IsMember(kinds));
    sweep->add_option("--axis", axis, "Levels, e.g. 1_1..4_4 or 2,3,4")->required();
    sweep->add_option("--trials", trials, "Instances per level")->check(CLI::PositiveNumber);
    sweep->add_option("--method", method, "Method name or number")->required();
    sweep->add_option("--out", sweep_out, "Override run.output_dir");

    auto* gen = app.add_subcommand("gen", "Print one generated instance as JSON");
    std::string gen_kind;
    std::string gen_complexity;
    std::uint64_t seed = 0;
    gen->add_option("--kind", gen_kind, "Procedural task kind")->required()->check(CLI::IsMember(kinds));
    gen->add_option("--complexity", gen_complexity, "Complexity label, e.g. 3_4")->required();
    gen->add_option("--seed", seed, "Generator seed");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_infrastructure;
    }

    try
    {
        if (*run)
            return run_command(config_path, parallelism, mode, run_out);
        if (*report)
            return report_command(records_dir, which, turn, report_out);
        if (*sweep)
            return sweep_command(sweep_config, kind, axis, trials, method, sweep_out);
        return gen_command(gen_kind, gen_complexity, seed);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_infrastructure;
    }
}
