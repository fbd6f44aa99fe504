// SPDX-License-Identifier: Apache-2.0
#include <steerbench/steering/steering.hpp>

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

namespace steerbench::steering
{

namespace
{

    constexpr std::string_view method_names[] = {
        "only_question",  "all_text",       "all_code",         "all_code_cot",         "autogen_concat",
        "autogen_system", "code_interpreter", "code_interpreter_plus", "code_text_sum", "self_estimate_score",
    };

    std::string join(std::initializer_list<std::string_view> parts)
    {
        std::string out;
        for (auto p: parts)
        {
            if (!out.empty())
                out += "\n\n";
            out += p;
        }
        return out;
    }

} // namespace

int method_number(MethodId m) noexcept
{
    return static_cast<int>(m);
}

std::string_view method_name(MethodId m) noexcept
{
    return method_names[method_number(m) - 1];
}

std::optional<MethodId> parse_method(std::string_view text)
{
    int n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec == std::errc() && ptr == text.data() + text.size())
    {
        if (n >= 1 && n <= 10)
            return static_cast<MethodId>(n);
        return std::nullopt;
    }
    for (MethodId m: all_methods)
        if (method_name(m) == text)
            return m;
    return std::nullopt;
}

bool is_refinable(MethodId m) noexcept
{
    return method_number(m) <= 6;
}

AssetMissing::AssetMissing(const std::string& name): SteeringError("prompt asset not found: " + name) {}

PromptAssets PromptAssets::load(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir))
        throw SteeringError("prompt asset directory not found: " + dir.string());
    PromptAssets assets;
    for (const auto& entry: std::filesystem::directory_iterator(dir))
    {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt")
            continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (!text.empty() && text.back() == '\n')
            text.pop_back();
        assets._texts[entry.path().stem().string()] = std::move(text);
    }
    return assets;
}

const std::string& PromptAssets::get(const std::string& name) const
{
    auto it = _texts.find(name);
    if (it == _texts.end())
        throw AssetMissing(name);
    return it->second;
}

std::string substitute(std::string_view text, const std::map<std::string, std::string>& slots)
{
    std::string out;
    std::size_t pos = 0;
    while (true)
    {
        auto open = text.find("{{", pos);
        if (open == std::string_view::npos)
            break;
        auto close = text.find("}}", open + 2);
        if (close == std::string_view::npos)
            break;
        std::string name(text.substr(open + 2, close - open - 2));
        auto it = slots.find(name);
        if (it == slots.end())
            throw SteeringError("no value for template slot {{" + name + "}}");
        out.append(text.substr(pos, open - pos));
        out += it->second;
        pos = close + 2;
    }
    out.append(text.substr(pos));
    return out;
}

std::string PromptAssets::render(const std::string& name, const std::map<std::string, std::string>& slots) const
{
    return substitute(get(name), slots);
}

llm::ChatRequest assemble_prompt(MethodId method, const tasks::TaskInstance& instance, const PromptAssets& assets,
                                 const std::string& autogen_asset)
{
    const std::string& q = instance.prompt;
    llm::ChatRequest r;
    std::string user;
    switch (method)
    {
    case MethodId::OnlyQuestion:
    case MethodId::CodeInterpreter:
        user = q;
        break;
    case MethodId::AllText:
    case MethodId::CodeTextSum:
        user = join({ assets.get("text_hint"), q });
        break;
    case MethodId::AllCode:
    case MethodId::CodeInterpreterPlus:
        user = join({ assets.get("code_hint"), q });
        break;
    case MethodId::AllCodeCoT:
        user = join({ assets.get("code_hint"), assets.get("cot_instruction"), q });
        break;
    case MethodId::AutoGenConcat:
        user = join({ assets.get(autogen_asset), q });
        break;
    case MethodId::AutoGenSystem:
        r.system_prompt = assets.get(autogen_asset);
        user = q;
        break;
    case MethodId::SelfEstimateScore:
        user = join({ assets.get("self_estimate"), q });
        break;
    }
    r.messages.push_back({ llm::Role::User, std::move(user) });
    return r;
}

namespace
{

    std::string outside_code(std::string_view response)
    {
        std::string out;
        bool in_fence = false;
        std::size_t fence = 0;
        std::size_t pos = 0;
        while (pos <= response.size())
        {
            auto eol = response.find('\n', pos);
            auto line = response.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            auto first = line.find_first_not_of(" \t");
            std::size_t run = 0;
            if (first != std::string_view::npos)
                while (first + run < line.size() && line[first + run] == '`')
                    ++run;
            if (!in_fence && run >= 3)
            {
                in_fence = true;
                fence = run;
            }
            else if (in_fence && run >= fence && line.find_first_not_of(" \t\r", first + run) == std::string_view::npos)
                in_fence = false;
            else if (!in_fence)
            {
                out.append(line);
                out.push_back('\n');
            }
            if (eol == std::string_view::npos)
                break;
            pos = eol + 1;
        }
        return out;
    }

    std::optional<double> score_after(const std::string& text, const char* label)
    {
        std::regex re("\\b" + std::string(label) +
                          R"(\s+score\s*(?:\(\s*0\s*-\s*10\s*\))?[^0-9\n]{0,40}?(\d+(?:\.\d+)?))",
                      std::regex::icase);
        std::smatch m;
        if (!std::regex_search(text, m, re))
            return std::nullopt;
        return std::stod(m[1].str());
    }

} // namespace

bool contains_terminate(std::string_view response)
{
    static const std::regex re(R"(\bterminate\b)", std::regex::icase);
    std::string text = outside_code(response);
    return std::regex_search(text, re);
}

SelfScores parse_self_scores(std::string_view response)
{
    std::string text(response);
    return { score_after(text, "coding"), score_after(text, "text") };
}

std::string format_execution(const sandbox::ExecutionResult& r)
{
    std::string out;
    if (r.timed_out)
        out = fmt::format("exitcode: {} (execution timed out after {} ms)\n", r.exit_code, r.duration_ms);
    else
        out = fmt::format("exitcode: {} (execution {})\n", r.exit_code, r.exit_code == 0 ? "succeeded" : "failed");
    out += "Code output:\n" + r.stdout_text;
    if (!r.stderr_text.empty())
    {
        if (!out.empty() && out.back() != '\n')
            out += '\n';
        out += "Error output:\n" + r.stderr_text;
    }
    return out;
}

} // namespace steerbench::steering
