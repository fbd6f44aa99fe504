// SPDX-License-Identifier: Apache-2.0
#include <steerbench/harness/harness.hpp>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

namespace steerbench::harness
{

namespace
{

    using JobKey = std::pair<std::string, steering::MethodId>;

    class Appender
    {
    public:
        explicit Appender(const std::filesystem::path& file): _out(file, std::ios::app | std::ios::binary)
        {
            if (!_out)
                throw HarnessError("cannot open " + file.string() + " for appending");
        }

        void write(const std::vector<metrics::RunRecord>& records)
        {
            std::string block;
            for (const auto& r: records)
                block += metrics::to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
            std::lock_guard lock(_mutex);
            _out << block;
            _out.flush();
            if (!_out)
                throw HarnessError("failed writing records");
        }

    private:
        std::ofstream _out;
        std::mutex _mutex;
    };

    std::string now_utc()
    {
        return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                        std::chrono::system_clock::now())));
    }

    // A stored job is complete when its turns are contiguous and the refinement loop would not continue.
    bool job_complete(const std::map<int, const metrics::RunRecord*>& turns, steering::MethodId method,
                      int max_turns)
    {
        if (turns.empty() || turns.begin()->first != 1)
            return false;
        int k = 0;
        for (const auto& [t, r]: turns)
        {
            if (t != k + 1)
                return false;
            k = t;
        }
        if (!steering::is_refinable(method) || max_turns <= 1 || k >= max_turns)
            return true;
        if (k < 2)
            return false;
        const auto& last = turns.at(k)->attempt;
        const auto& prev = turns.at(k - 1)->attempt;
        return (!last.transcript.empty() && steering::contains_terminate(last.transcript.back().response.text)) ||
               last.final_answer == prev.final_answer;
    }

    std::shared_ptr<llm::Provider> make_provider(const RunConfig& c, const RunHooks& hooks)
    {
        if (hooks.provider)
            return hooks.provider;
        if (c.mode == llm::SessionMode::Replay)
            return nullptr;
        llm::ProviderConfig pc;
        pc.name = c.provider.name;
        pc.base_url = c.provider.base_url;
        pc.api_key = llm::api_key_from_env(c.provider.name);
        pc.timeout = std::chrono::seconds(c.provider.timeout_s);
        return std::make_shared<llm::OpenAICompatibleProvider>(pc);
    }

    std::shared_ptr<sandbox::Executor> make_executor(const RunConfig& c, const RunHooks& hooks)
    {
        if (hooks.executor)
            return hooks.executor;
        if (!c.sandbox.shim.empty())
            return std::make_shared<sandbox::ShimExecutor>(c.sandbox.shim);
        return std::make_shared<sandbox::DirectExecutor>(c.sandbox.interpreter);
    }

    void write_manifest(const RunConfig& c, const std::string& hash, const std::string& started,
                        const RunSummary& s)
    {
        nlohmann::json failures = nlohmann::json::object();
        for (const auto& [reason, n]: s.failures_by_reason)
            failures[reason] = n;
        nlohmann::json m = {
            { "config_hash", hash },
            { "config", hashed_fields(c) },
            { "mode", std::string(llm::mode_name(c.mode)) },
            { "parallelism", c.parallelism },
            { "started_at", started },
            { "finished_at", now_utc() },
            { "summary",
              { { "jobs", s.jobs },
                { "executed", s.executed },
                { "skipped", s.skipped },
                { "records_written", s.records_written },
                { "successes", s.successes },
                { "failures", s.failures },
                { "failures_by_reason", failures },
                { "errors", s.errors } } },
        };
        std::ofstream out(c.output_dir / manifest_file_name, std::ios::trunc);
        out << m.dump(2) << "\n";
    }

} // namespace

int RunSummary::exit_code() const noexcept
{
    if (!errors.empty())
        return 2;
    return failures > 0 ? 1 : 0;
}

RunSummary run(const RunConfig& config, const RunHooks& hooks)
{
    validate(config);
    std::string started = now_utc();
    std::string hash = config_hash(config);
    RunSummary summary;

    std::filesystem::create_directories(config.output_dir);
    auto records_path = config.output_dir / records_file_name;

    std::vector<metrics::RunRecord> existing;
    if (std::filesystem::exists(records_path))
    {
        try
        {
            existing = metrics::load_records(records_path);
        }
        catch (const metrics::InvalidRecord& e)
        {
            throw HarnessError(e.what());
        }
    }
    std::map<JobKey, std::map<int, const metrics::RunRecord*>> stored;
    for (const auto& r: existing)
        if (r.config_hash == hash)
            stored[{ r.attempt.instance_id, r.attempt.method }][r.attempt.turn] = &r;

    steering::PromptAssets assets;
    try
    {
        assets = steering::PromptAssets::load(config.assets_dir);
    }
    catch (const steering::SteeringError& e)
    {
        throw ConfigError("run.assets_dir", e.what());
    }

    std::vector<tasks::TaskInstance> instances;
    try
    {
        instances = plan_instances(config);
    }
    catch (const tasks::TaskError& e)
    {
        throw ConfigError("task", e.what());
    }

    struct Job
    {
        const tasks::TaskInstance* instance;
        steering::MethodId method;
    };
    std::vector<Job> jobs;
    for (const auto& inst: instances)
        for (auto m: config.methods)
        {
            ++summary.jobs;
            auto it = stored.find({ inst.id, m });
            if (it != stored.end() && job_complete(it->second, m, config.max_turns))
                ++summary.skipped;
            else
                jobs.push_back({ &inst, m });
        }

    std::map<JobKey, std::vector<metrics::RunRecord>> fresh;
    if (!jobs.empty())
    {
        std::shared_ptr<llm::ReplayStore> store;
        if (config.mode != llm::SessionMode::Live)
        {
            if (config.store.has_parent_path())
                std::filesystem::create_directories(config.store.parent_path());
            store = std::make_shared<llm::ReplayStore>(config.store);
        }
        std::shared_ptr<llm::Provider> provider;
        try
        {
            provider = make_provider(config, hooks);
        }
        catch (const llm::GatewayError& e)
        {
            summary.errors.push_back(e.what());
            write_manifest(config, hash, started, summary);
            return summary;
        }
        std::shared_ptr<llm::TokenBucket> limiter;
        if (config.provider.rate_per_second > 0.0)
            limiter = std::make_shared<llm::TokenBucket>(config.provider.rate_per_second, config.provider.burst);
        llm::GatewayOptions options;
        options.mode = config.mode;
        llm::Gateway gateway(options, provider, store, limiter);
        steering::RecordingExecutor executor(config.mode, make_executor(config, hooks), store);

        auto caps = effective_capabilities(config);
        steering::SteeringConfig steering_config { config.max_tool_turns, config.max_turns };
        Appender appender(records_path);
        std::mutex summary_mutex;
        std::atomic<std::size_t> next { 0 };

        auto worker = [&] {
            while (true)
            {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs.size())
                    return;
                const auto& job = jobs[i];
                JobKey key { job.instance->id, job.method };
                try
                {
                    steering::Deps deps { gateway, executor, assets, config.model_id, caps,
                                          config.sandbox.limits, config.temperature, config.max_output_tokens };
                    deps.autogen_asset = config.autogen_asset;
                    auto attempts = steering::run_method(job.method, *job.instance, deps, steering_config);

                    std::vector<metrics::RunRecord> records;
                    std::vector<metrics::RunRecord> to_write;
                    auto have = stored.find(key);
                    for (auto& a: attempts)
                    {
                        metrics::RunRecord r { std::move(a), config.model_id, job.instance->kind,
                                               tasks::complexity_label(job.instance->complexity), hash };
                        bool present = have != stored.end() && have->second.count(r.attempt.turn);
                        if (!present)
                            to_write.push_back(r);
                        records.push_back(std::move(r));
                    }
                    appender.write(to_write);
                    std::lock_guard lock(summary_mutex);
                    ++summary.executed;
                    summary.records_written += to_write.size();
                    for (const auto& r: records)
                        for (const auto& w: r.attempt.warnings)
                            if (std::find(summary.warnings.begin(), summary.warnings.end(), w) ==
                                summary.warnings.end())
                                summary.warnings.push_back(w);
                    fresh[key] = std::move(records);
                }
                catch (const std::exception& e)
                {
                    std::lock_guard lock(summary_mutex);
                    summary.errors.push_back(fmt::format("{} {}: {}", job.instance->id,
                                                         steering::method_name(job.method), e.what()));
                }
            }
        };

        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), jobs.size());
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < n; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto& t: pool)
            t.join();
        std::sort(summary.errors.begin(), summary.errors.end());
    }

    for (const auto& inst: instances)
        for (auto m: config.methods)
        {
            JobKey key { inst.id, m };
            const metrics::RunRecord* last = nullptr;
            if (auto f = fresh.find(key); f != fresh.end() && !f->second.empty())
                last = &f->second.back();
            else if (auto s = stored.find(key); s != stored.end() && !s->second.empty())
                last = s->second.rbegin()->second;
            if (!last)
                continue;
            if (last->attempt.verdict.success)
                ++summary.successes;
            else
            {
                ++summary.failures;
                auto reason = last->attempt.verdict.failure_reason;
                ++summary.failures_by_reason[reason ? std::string(tasks::failure_name(*reason)) : "Unknown"];
            }
        }

    write_manifest(config, hash, started, summary);
    return summary;
}

std::string format_summary(const RunSummary& s)
{
    std::string out = fmt::format("jobs: {} (executed {}, skipped {})\n", s.jobs, s.executed, s.skipped);
    out += fmt::format("records written: {}\n", s.records_written);
    out += fmt::format("final attempts: {} succeeded, {} failed\n", s.successes, s.failures);
    for (const auto& [reason, n]: s.failures_by_reason)
        out += fmt::format("  {}: {}\n", reason, n);
    for (const auto& w: s.warnings)
        out += fmt::format("warning: {}\n", w);
    if (!s.errors.empty())
    {
        out += fmt::format("infrastructure errors: {}\n", s.errors.size());
        for (std::size_t i = 0; i < s.errors.size() && i < 10; ++i)
            out += fmt::format("  {}\n", s.errors[i]);
    }
    return out;
}

std::vector<metrics::RunRecord> read_records(const std::filesystem::path& dir)
{
    auto file = dir / records_file_name;
    if (!std::filesystem::exists(file))
        throw NoRecords("no " + std::string(records_file_name) + " in " + dir.string());
    auto records = metrics::load_records(file);
    if (records.empty())
        throw NoRecords(file.string() + " holds no records");
    return records;
}

metrics::Report write_report(const std::filesystem::path& records_dir, const std::string& name,
                             const std::filesystem::path& out_dir, int turn)
{
    if (!metrics::is_report_name(name))
        throw metrics::MetricsError(fmt::format(
            "unknown report '{}'; valid reports: scores, avenorm, decomposition, usage, cost, complexity", name));
    auto records = read_records(records_dir);
    auto report = metrics::build_report(name, records, turn);
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / (name + ".csv"), std::ios::trunc | std::ios::binary);
    out << metrics::to_csv(report.table);
    if (!out)
        throw HarnessError("cannot write " + (out_dir / (name + ".csv")).string());
    return report;
}

} // namespace steerbench::harness
