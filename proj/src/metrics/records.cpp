// SPDX-License-Identifier: Apache-2.0
#include <steerbench/metrics/metrics.hpp>

#include <fmt/format.h>

#include <fstream>

namespace steerbench::metrics
{

std::string record_key(const std::string& instance_id, steering::MethodId method, int turn,
                       const std::string& config_hash)
{
    return fmt::format("{}|{}|{}|{}", instance_id, steering::method_name(method), turn, config_hash);
}

std::string record_key(const RunRecord& r)
{
    return record_key(r.attempt.instance_id, r.attempt.method, r.attempt.turn, r.config_hash);
}

nlohmann::json to_json(const RunRecord& r)
{
    return {
        { "key", record_key(r) },
        { "model_id", r.model_id },
        { "config_hash", r.config_hash },
        { "task", std::string(tasks::task_name(r.task)) },
        { "complexity", r.complexity },
        { "attempt", steering::to_json(r.attempt) },
    };
}

RunRecord record_from_json(const nlohmann::json& j)
{
    try
    {
        RunRecord r;
        r.model_id = j.at("model_id").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        auto kind = tasks::parse_task_kind(j.at("task").get<std::string>());
        if (!kind)
            throw InvalidRecord("unknown task " + j.at("task").dump());
        r.task = *kind;
        r.complexity = j.at("complexity").get<std::string>();
        r.attempt = steering::attempt_from_json(j.at("attempt"));
        if (j.contains("key") && j["key"].get<std::string>() != record_key(r))
            throw InvalidRecord("record key does not match its attempt: " + j["key"].get<std::string>());
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidRecord(std::string("malformed record: ") + e.what());
    }
    catch (const steering::SteeringError& e)
    {
        throw InvalidRecord(e.what());
    }
}

std::vector<RunRecord> load_records(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw InvalidRecord("cannot open " + file.string());
    std::vector<RunRecord> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try
        {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        }
        catch (const std::exception& e)
        {
            throw InvalidRecord(fmt::format("{}:{}: {}", file.string(), n, e.what()));
        }
    }
    return out;
}

} // namespace steerbench::metrics
