// SPDX-License-Identifier: Apache-2.0
#include <steerbench/sandbox/sandbox.hpp>

#include <algorithm>
#include <cctype>

namespace steerbench::sandbox
{

std::string_view modality_name(Modality m) noexcept
{
    return m == Modality::Code ? "code" : "text";
}

std::optional<Modality> parse_modality(std::string_view name)
{
    if (name == "code")
        return Modality::Code;
    if (name == "text")
        return Modality::Text;
    return std::nullopt;
}

namespace
{

    std::size_t indent_of(std::string_view line)
    {
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        return i;
    }

    std::size_t backtick_run(std::string_view s)
    {
        std::size_t n = 0;
        while (n < s.size() && s[n] == '`')
            ++n;
        return n;
    }

    bool is_blank(std::string_view s)
    {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    }

    std::string lower(std::string_view s)
    {
        std::string out(s);
        for (auto& c: out)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

} // namespace

std::vector<CodeBlock> extract_code_blocks(std::string_view response)
{
    std::vector<CodeBlock> blocks;
    std::optional<CodeBlock> open;
    std::size_t fence_len = 0;

    std::size_t pos = 0;
    while (pos <= response.size())
    {
        std::size_t eol = response.find('\n', pos);
        bool last = eol == std::string_view::npos;
        std::string_view line = response.substr(pos, last ? std::string_view::npos : eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::string_view rest = line.substr(indent_of(line));
        std::size_t run = backtick_run(rest);

        if (!open)
        {
            if (run >= 3)
            {
                std::string_view info = rest.substr(run);
                info.remove_prefix(indent_of(info));
                std::size_t end = 0;
                while (end < info.size() && !std::isspace(static_cast<unsigned char>(info[end])) && info[end] != '`')
                    ++end;
                open = CodeBlock { std::string(info.substr(0, end)), {}, blocks.size() };
                fence_len = run;
            }
        }
        else if (run >= fence_len && is_blank(rest.substr(run)))
        {
            blocks.push_back(std::move(*open));
            open.reset();
        }
        else if (!(last && line.empty()))
        {
            open->body.append(line);
            open->body.push_back('\n');
        }

        if (last)
            break;
        pos = eol + 1;
    }
    if (open)
        blocks.push_back(std::move(*open));
    return blocks;
}

bool is_executable_tag(std::string_view tag, std::string_view guest)
{
    if (tag.empty())
        return true;
    std::string t = lower(tag);
    std::string g = lower(guest);
    if (t == g)
        return true;
    if (g == "python")
        return t == "py" || t == "python3" || t == "py3";
    return false;
}

std::optional<CodeBlock> first_executable_block(std::string_view response, std::string_view guest)
{
    for (auto& b: extract_code_blocks(response))
        if (is_executable_tag(b.language_tag, guest))
            return std::move(b);
    return std::nullopt;
}

Modality classify_modality(std::string_view response, std::string_view guest)
{
    return first_executable_block(response, guest) ? Modality::Code : Modality::Text;
}

namespace
{

    std::string valid_utf8(const std::string& s)
    {
        auto text = nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        return nlohmann::json::parse(text).get<std::string>();
    }

} // namespace

nlohmann::json to_json(const ExecutionResult& r)
{
    return {
        { "stdout", valid_utf8(r.stdout_text) },
        { "stderr", valid_utf8(r.stderr_text) },
        { "exit_code", r.exit_code },
        { "duration_ms", r.duration_ms },
        { "timed_out", r.timed_out },
    };
}

ExecutionResult execution_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ShimProtocolError("execution report is not a JSON object");
    auto field = [&](const char* key, auto check) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end() || !check(*it))
            throw ShimProtocolError(std::string("execution report has no valid \"") + key + "\"");
        return *it;
    };
    auto is_str = [](const nlohmann::json& v) { return v.is_string(); };
    auto is_int = [](const nlohmann::json& v) { return v.is_number_integer(); };
    auto is_num = [](const nlohmann::json& v) { return v.is_number(); };
    auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };

    ExecutionResult r;
    r.stdout_text = field("stdout", is_str).get<std::string>();
    r.stderr_text = field("stderr", is_str).get<std::string>();
    r.exit_code = field("exit_code", is_int).get<int>();
    r.duration_ms = static_cast<std::int64_t>(field("duration_ms", is_num).get<double>());
    r.timed_out = field("timed_out", is_bool).get<bool>();
    return r;
}

} // namespace steerbench::sandbox
