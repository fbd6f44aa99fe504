// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/dataset.hpp>

#include <fmt/format.h>

#include <fstream>

namespace steerbench::tasks
{

MissingFile::MissingFile(const std::filesystem::path& path): TaskError("dataset file not found: " + path.string()) {}

MalformedRecord::MalformedRecord(std::size_t line, const std::string& why):
    TaskError(fmt::format("malformed dataset record on line {}: {}", line, why)), _line(line)
{
}

namespace
{

    std::string text_field(const nlohmann::json& j, const char* key, std::size_t line)
    {
        if (!j.contains(key))
            throw MalformedRecord(line, fmt::format("missing \"{}\"", key));
        const auto& v = j[key];
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_number())
            return v.dump();
        throw MalformedRecord(line, fmt::format("\"{}\" must be a string", key));
    }

    std::string option_line(const std::string& option, std::size_t index)
    {
        if (option.size() >= 3 && option[0] == '(' && option[2] == ')')
            return option;
        return fmt::format("({}) {}", static_cast<char>('A' + index), option);
    }

} // namespace

std::vector<TaskInstance> load_dataset(const std::filesystem::path& path, TaskKind kind)
{
    if (is_procedural(kind))
        throw TaskError(fmt::format("task kind '{}' is generated, not loaded from a dataset", task_name(kind)));
    std::ifstream in(path);
    if (!in)
        throw MissingFile(path);

    std::vector<TaskInstance> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;

        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw MalformedRecord(number, e.what());
        }
        if (!j.is_object())
            throw MalformedRecord(number, "record is not a JSON object");

        DatasetPayload payload;
        payload.gold = text_field(j, "answer", number);
        std::string prompt = text_field(j, "question", number);
        if (j.contains("options") && !j["options"].is_null())
        {
            if (!j["options"].is_array())
                throw MalformedRecord(number, "\"options\" must be a list");
            for (const auto& o: j["options"])
            {
                if (!o.is_string())
                    throw MalformedRecord(number, "options must be strings");
                payload.options.push_back(o.get<std::string>());
            }
        }
        if (!payload.options.empty())
        {
            prompt += "\nOptions:";
            for (std::size_t i = 0; i < payload.options.size(); ++i)
                prompt += "\n" + option_line(payload.options[i], i);
        }

        TaskInstance inst;
        inst.id = fmt::format("{}-{:04}", task_name(kind), out.size() + 1);
        inst.kind = kind;
        inst.complexity = std::monostate {};
        inst.seed = out.size() + 1;
        inst.prompt = std::move(prompt);
        inst.payload = std::move(payload);
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace steerbench::tasks
