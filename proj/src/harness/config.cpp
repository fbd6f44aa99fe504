// SPDX-License-Identifier: Apache-2.0
#include <steerbench/harness/harness.hpp>

#include <steerbench/tasks/dataset.hpp>
#include <steerbench/tasks/generate.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace steerbench::harness
{

namespace pt = boost::property_tree;

ConfigError::ConfigError(std::string field, const std::string& message):
    HarnessError(fmt::format("config field '{}': {}", field, message)), _field(std::move(field))
{
}

namespace
{

    std::string trim(std::string_view s)
    {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos)
            return {};
        auto e = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(b, e - b + 1));
    }

    std::vector<std::string> split(std::string_view s, char sep)
    {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (pos <= s.size())
        {
            auto next = s.find(sep, pos);
            auto part = trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
            if (!part.empty())
                out.push_back(part);
            if (next == std::string_view::npos)
                break;
            pos = next + 1;
        }
        return out;
    }

    // Reads keys from one INI section and remembers which were consumed.
    class Section
    {
    public:
        Section(std::string name, const pt::ptree* tree): _name(std::move(name)), _tree(tree) {}

        std::string field(const std::string& key) const { return _name + "." + key; }

        std::optional<std::string> text(const std::string& key)
        {
            _seen.insert(key);
            if (!_tree)
                return std::nullopt;
            auto it = _tree->find(key);
            if (it == _tree->not_found())
                return std::nullopt;
            return trim(it->second.data());
        }

        std::string required(const std::string& key)
        {
            auto v = text(key);
            if (!v || v->empty())
                throw ConfigError(field(key), "is required");
            return *v;
        }

        template<class T>
        T number(const std::string& key, T fallback)
        {
            auto v = text(key);
            if (!v)
                return fallback;
            T out {};
            auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
            if (ec != std::errc() || ptr != v->data() + v->size())
                throw ConfigError(field(key), fmt::format("'{}' is not a number", *v));
            return out;
        }

        std::optional<bool> flag(const std::string& key)
        {
            auto v = text(key);
            if (!v)
                return std::nullopt;
            if (*v == "true" || *v == "yes" || *v == "1")
                return true;
            if (*v == "false" || *v == "no" || *v == "0")
                return false;
            throw ConfigError(field(key), fmt::format("'{}' is not a boolean", *v));
        }

        void reject_unknown() const
        {
            if (!_tree)
                return;
            for (const auto& [key, value]: *_tree)
                if (!_seen.count(key))
                    throw ConfigError(field(key), "unknown key");
        }

    private:
        std::string _name;
        const pt::ptree* _tree;
        std::set<std::string> _seen;
    };

    std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
    {
        if (p.empty())
            return {};
        std::filesystem::path path(p);
        if (path.is_relative())
            path = base / path;
        return path.lexically_normal();
    }

    std::vector<steering::MethodId> parse_methods(const std::string& field, const std::string& text)
    {
        if (text == "all")
            return { std::begin(steering::all_methods), std::end(steering::all_methods) };
        std::vector<steering::MethodId> out;
        for (const auto& part: split(text, ','))
        {
            auto m = steering::parse_method(part);
            if (!m)
                throw ConfigError(field, fmt::format("unknown method '{}'", part));
            if (std::find(out.begin(), out.end(), *m) == out.end())
                out.push_back(*m);
        }
        return out;
    }

    TaskSpec parse_task(Section& s, const std::string& section_suffix, const std::filesystem::path& base)
    {
        TaskSpec t;
        std::string kind_name = s.text("kind").value_or(section_suffix);
        auto kind = tasks::parse_task_kind(kind_name);
        if (!kind)
            throw ConfigError(s.field("kind"), fmt::format("unknown task kind '{}'", kind_name));
        t.kind = *kind;
        t.trials = s.number<int>("trials", t.trials);
        if (tasks::is_procedural(t.kind))
        {
            try
            {
                t.complexity = tasks::parse_complexity(t.kind, s.required("complexity"));
            }
            catch (const tasks::TaskError& e)
            {
                throw ConfigError(s.field("complexity"), e.what());
            }
        }
        else
        {
            t.dataset = resolve(base, s.required("dataset"));
        }
        return t;
    }

} // namespace

RunConfig parse_config(const std::string& ini_text, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    try
    {
        std::istringstream in(ini_text);
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError("<file>", fmt::format("line {}: {}", e.line(), e.message()));
    }

    auto find = [&](const std::string& name) -> const pt::ptree* {
        auto it = tree.find(name);
        return it == tree.not_found() ? nullptr : &it->second;
    };

    RunConfig c;
    Section run("run", find("run"));
    c.model_id = run.required("model_id");
    c.methods = parse_methods(run.field("methods"), run.required("methods"));
    c.seed = run.number<std::uint64_t>("seed", c.seed);
    c.max_turns = run.number<int>("max_turns", c.max_turns);
    c.max_tool_turns = run.number<int>("max_tool_turns", c.max_tool_turns);
    c.parallelism = run.number<int>("parallelism", c.parallelism);
    if (auto m = run.text("mode"))
    {
        auto mode = llm::parse_mode(*m);
        if (!mode)
            throw ConfigError(run.field("mode"), fmt::format("'{}' is not one of live, record, replay", *m));
        c.mode = *mode;
    }
    c.output_dir = resolve(base_dir, run.required("output_dir"));
    c.assets_dir = resolve(base_dir, run.text("assets_dir").value_or(STEERBENCH_DEFAULT_ASSETS_DIR));
    c.temperature = run.number<double>("temperature", c.temperature);
    c.max_output_tokens = run.number<int>("max_output_tokens", c.max_output_tokens);
    c.autogen_asset = run.text("autogen_asset").value_or(c.autogen_asset);
    run.reject_unknown();

    Section provider("provider", find("provider"));
    c.provider.name = provider.text("name").value_or(c.provider.name);
    c.provider.base_url = provider.text("base_url").value_or(c.provider.base_url);
    c.provider.timeout_s = provider.number<int>("timeout_s", c.provider.timeout_s);
    c.provider.rate_per_second = provider.number<double>("rate_per_second", c.provider.rate_per_second);
    c.provider.burst = provider.number<double>("burst", c.provider.burst);
    c.provider.system_prompt = provider.flag("system_prompt");
    provider.reject_unknown();

    Section store("store", find("store"));
    c.store = resolve(base_dir, store.text("path").value_or(""));
    store.reject_unknown();

    Section sb("sandbox", find("sandbox"));
    c.sandbox.interpreter = sb.text("interpreter").value_or(c.sandbox.interpreter);
    c.sandbox.shim = split(sb.text("shim").value_or(""), ' ');
    c.sandbox.limits.timeout_s = sb.number<double>("timeout_s", c.sandbox.limits.timeout_s);
    c.sandbox.limits.output_cap = sb.number<std::size_t>("output_cap", c.sandbox.limits.output_cap);
    c.sandbox.limits.memory_cap = sb.number<std::size_t>("memory_cap", c.sandbox.limits.memory_cap);
    sb.reject_unknown();

    for (const auto& [name, body]: tree)
    {
        if (name == "run" || name == "provider" || name == "store" || name == "sandbox")
            continue;
        if (name.rfind("task.", 0) != 0)
            throw ConfigError(name, "unknown section");
        Section s(name, &body);
        c.tasks.push_back(parse_task(s, name.substr(5), base_dir));
        s.reject_unknown();
    }

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError("<file>", "cannot read " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto base = std::filesystem::absolute(file).parent_path();
    return parse_config(buf.str(), base);
}

void validate(const RunConfig& c)
{
    if (c.model_id.empty())
        throw ConfigError("run.model_id", "is required");
    if (c.methods.empty())
        throw ConfigError("run.methods", "lists no methods");
    if (c.tasks.empty())
        throw ConfigError("task", "no [task.<name>] section");
    if (c.parallelism < 1)
        throw ConfigError("run.parallelism", "must be at least 1");
    if (c.max_turns < 1)
        throw ConfigError("run.max_turns", "must be at least 1");
    if (c.max_tool_turns < 1)
        throw ConfigError("run.max_tool_turns", "must be at least 1");
    if (c.max_output_tokens < 1)
        throw ConfigError("run.max_output_tokens", "must be at least 1");
    if (c.temperature < 0.0 || c.temperature > 2.0)
        throw ConfigError("run.temperature", "must be within [0, 2]");
    if (c.output_dir.empty())
        throw ConfigError("run.output_dir", "is required");
    if (c.autogen_asset.empty())
        throw ConfigError("run.autogen_asset", "must name a prompt asset");
    if (c.mode != llm::SessionMode::Live && c.store.empty())
        throw ConfigError("store.path", fmt::format("is required in {} mode", llm::mode_name(c.mode)));
    if (c.sandbox.limits.timeout_s <= 0.0)
        throw ConfigError("sandbox.timeout_s", "must be positive");
    if (c.sandbox.limits.output_cap == 0)
        throw ConfigError("sandbox.output_cap", "must be positive");
    if (c.provider.timeout_s < 1)
        throw ConfigError("provider.timeout_s", "must be at least 1");
    if (c.provider.rate_per_second < 0.0 || c.provider.burst < 1.0)
        throw ConfigError("provider.rate_per_second", "needs a non-negative rate and a burst of at least 1");
    for (std::size_t i = 0; i < c.tasks.size(); ++i)
    {
        const auto& t = c.tasks[i];
        auto prefix = fmt::format("task.{}", tasks::task_name(t.kind));
        if (t.trials < 1)
            throw ConfigError(prefix + ".trials", "must be at least 1");
        if (tasks::is_procedural(t.kind))
        {
            try
            {
                tasks::validate_complexity(t.kind, t.complexity);
            }
            catch (const tasks::TaskError& e)
            {
                throw ConfigError(prefix + ".complexity", e.what());
            }
        }
        else if (t.dataset.empty())
            throw ConfigError(prefix + ".dataset", "is required for dataset tasks");
    }
}

llm::ModelCapabilities effective_capabilities(const RunConfig& c)
{
    auto caps = llm::default_capabilities(c.model_id);
    if (c.provider.system_prompt)
        caps.system_prompt = *c.provider.system_prompt;
    return caps;
}

nlohmann::json hashed_fields(const RunConfig& c)
{
    auto methods = nlohmann::json::array();
    for (auto m: c.methods)
        methods.push_back(std::string(steering::method_name(m)));
    auto task_list = nlohmann::json::array();
    for (const auto& t: c.tasks)
        task_list.push_back({ { "kind", std::string(tasks::task_name(t.kind)) },
                              { "complexity", tasks::complexity_label(t.complexity) },
                              { "trials", t.trials },
                              { "dataset", t.dataset.filename().string() } });
    return {
        { "model_id", c.model_id },
        { "methods", methods },
        { "tasks", task_list },
        { "seed", c.seed },
        { "max_turns", c.max_turns },
        { "max_tool_turns", c.max_tool_turns },
        { "temperature", c.temperature },
        { "max_output_tokens", c.max_output_tokens },
        { "autogen_asset", c.autogen_asset },
        { "system_prompt", effective_capabilities(c).system_prompt },
        { "limits",
          { { "timeout_s", c.sandbox.limits.timeout_s },
            { "output_cap", c.sandbox.limits.output_cap },
            { "memory_cap", c.sandbox.limits.memory_cap } } },
    };
}

std::string config_hash(const RunConfig& c)
{
    return llm::sha256_hex(hashed_fields(c).dump()).substr(0, 16);
}

std::vector<tasks::TaskInstance> plan_instances(const RunConfig& c)
{
    std::vector<tasks::TaskInstance> out;
    for (const auto& t: c.tasks)
    {
        if (tasks::is_procedural(t.kind))
        {
            for (int i = 0; i < t.trials; ++i)
                out.push_back(tasks::generate(t.kind, t.complexity, c.seed + static_cast<std::uint64_t>(i)));
            continue;
        }
        auto all = tasks::load_dataset(t.dataset, t.kind);
        if (all.size() > static_cast<std::size_t>(t.trials))
            all.resize(static_cast<std::size_t>(t.trials));
        out.insert(out.end(), all.begin(), all.end());
    }
    return out;
}

std::vector<tasks::Complexity> parse_axis(tasks::TaskKind kind, const std::string& spec)
{
    if (!tasks::is_procedural(kind))
        throw ConfigError("axis", fmt::format("task {} has no complexity axis", tasks::task_name(kind)));
    std::vector<tasks::Complexity> out;
    try
    {
        auto dots = spec.find("..");
        if (dots == std::string::npos)
        {
            for (const auto& label: split(spec, ','))
                out.push_back(tasks::parse_complexity(kind, label));
        }
        else
        {
            auto lo = tasks::complexity_key(tasks::parse_complexity(kind, trim(spec.substr(0, dots))));
            auto hi = tasks::complexity_key(tasks::parse_complexity(kind, trim(spec.substr(dots + 2))));
            for (std::size_t i = 0; i < lo.size(); ++i)
                if (lo[i] > hi[i])
                    throw ConfigError("axis", fmt::format("range '{}' is decreasing in parameter {}", spec, i + 1));
            std::vector<int> cur = lo;
            while (true)
            {
                std::string label;
                for (std::size_t i = 0; i < cur.size(); ++i)
                    label += (i ? "_" : "") + std::to_string(cur[i]);
                out.push_back(tasks::parse_complexity(kind, label));
                std::size_t i = cur.size();
                while (i > 0 && cur[i - 1] == hi[i - 1])
                {
                    cur[i - 1] = lo[i - 1];
                    --i;
                }
                if (i == 0)
                    break;
                ++cur[i - 1];
            }
        }
    }
    catch (const tasks::TaskError& e)
    {
        throw ConfigError("axis", e.what());
    }
    if (out.empty())
        throw ConfigError("axis", "names no complexity level");
    return out;
}

RunConfig sweep_config(const RunConfig& base, tasks::TaskKind kind, const std::string& axis, int trials,
                       steering::MethodId method)
{
    RunConfig c = base;
    c.methods = { method };
    c.tasks.clear();
    for (auto& level: parse_axis(kind, axis))
        c.tasks.push_back({ kind, level, trials, {} });
    validate(c);
    return c;
}

} // namespace steerbench::harness
