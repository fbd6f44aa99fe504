// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/blocksworld.hpp>
#include <steerbench/tasks/boxlift.hpp>
#include <steerbench/tasks/boxnet.hpp>
#include <steerbench/tasks/game24.hpp>
#include <steerbench/tasks/pathplan.hpp>
#include <steerbench/tasks/task.hpp>

#include <fmt/format.h>

#include <charconv>

namespace steerbench::tasks
{

namespace
{

    struct KindInfo
    {
        TaskKind kind;
        std::string_view name;
    };

    constexpr KindInfo kind_table[] = {
        { TaskKind::NumberMultiply, "number_multiply" },
        { TaskKind::Game24, "game24" },
        { TaskKind::PathPlan, "path_plan" },
        { TaskKind::Letters, "letters" },
        { TaskKind::BoxLift, "boxlift" },
        { TaskKind::BoxNet, "boxnet" },
        { TaskKind::Blocksworld, "blocksworld" },
        { TaskKind::DateUnderstanding, "date_understanding" },
        { TaskKind::WebOfLies, "web_of_lies" },
        { TaskKind::LogicalDeduction, "logical_deduction" },
        { TaskKind::Navigate, "navigate" },
        { TaskKind::GsmHard, "gsm_hard" },
        { TaskKind::MathGeometry, "math_geometry" },
        { TaskKind::MathCountProb, "math_count_prob" },
    };

    constexpr std::string_view failure_names[] = {
        "ParseError", "WrongValue", "IllegalMove", "ConstraintViolated", "StepLimitExceeded", "Timeout", "NoAnswer",
    };

    std::vector<int> split_ints(std::string_view label)
    {
        std::vector<int> out;
        while (true)
        {
            auto pos = label.find('_');
            auto part = label.substr(0, pos);
            int value = 0;
            auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
            if (ec != std::errc {} || ptr != part.data() + part.size() || part.empty())
                throw InvalidComplexity(fmt::format("malformed complexity label '{}'", label));
            out.push_back(value);
            if (pos == std::string_view::npos)
                break;
            label.remove_prefix(pos + 1);
        }
        return out;
    }

    void require(bool ok, std::string_view what)
    {
        if (!ok)
            throw InvalidComplexity(std::string(what));
    }

    nlohmann::json cell_json(Cell c) { return nlohmann::json::array({ c.row, c.col }); }
    Cell cell_from(const nlohmann::json& j) { return { j.at(0).get<int>(), j.at(1).get<int>() }; }

    nlohmann::json payload_json(const Payload& payload)
    {
        using nlohmann::json;
        return std::visit(
            [](const auto& p) -> json {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, std::monostate>)
                    return nullptr;
                else if constexpr (std::is_same_v<T, MultiplyPayload>)
                    return { { "lhs", p.lhs.str() }, { "rhs", p.rhs.str() } };
                else if constexpr (std::is_same_v<T, Game24Payload>)
                    return { { "values", p.values } };
                else if constexpr (std::is_same_v<T, LettersPayload>)
                    return { { "word", p.word }, { "letter", std::string(1, p.letter) } };
                else if constexpr (std::is_same_v<T, BoxLiftPayload>)
                    return { { "weights", p.weights }, { "capacities", p.capacities }, { "step_limit", p.step_limit } };
                else if constexpr (std::is_same_v<T, BoxNetPayload>)
                {
                    json boxes = json::array();
                    for (const auto& b: p.boxes)
                        boxes.push_back({ { "color", b.color }, { "cell", cell_json(b.cell) }, { "on_goal", b.on_goal } });
                    json goals = json::array();
                    for (const auto& g: p.goals)
                        goals.push_back({ { "color", g.color }, { "cell", cell_json(g.cell) } });
                    return { { "rows", p.rows }, { "cols", p.cols }, { "boxes", boxes }, { "goals", goals } };
                }
                else if constexpr (std::is_same_v<T, BlocksworldPayload>)
                    return { { "initial", p.initial }, { "goal", p.goal } };
                else if constexpr (std::is_same_v<T, PathPlanPayload>)
                {
                    json obstacles = json::array();
                    for (auto c: p.obstacles)
                        obstacles.push_back(cell_json(c));
                    return { { "side", p.side },
                             { "start", cell_json(p.start) },
                             { "goal", cell_json(p.goal) },
                             { "obstacles", obstacles } };
                }
                else
                    return { { "gold", p.gold }, { "options", p.options } };
            },
            payload);
    }

    Payload payload_from(TaskKind kind, const nlohmann::json& j)
    {
        switch (kind)
        {
            case TaskKind::NumberMultiply:
                return MultiplyPayload { expr::BigInt(j.at("lhs").get<std::string>()),
                                         expr::BigInt(j.at("rhs").get<std::string>()) };
            case TaskKind::Game24: return Game24Payload { j.at("values").get<std::vector<int>>() };
            case TaskKind::Letters:
            {
                auto letter = j.at("letter").get<std::string>();
                return LettersPayload { j.at("word").get<std::string>(), letter.empty() ? ' ' : letter[0] };
            }
            case TaskKind::BoxLift:
                return BoxLiftPayload { j.at("weights").get<std::vector<int>>(),
                                        j.at("capacities").get<std::vector<int>>(),
                                        j.at("step_limit").get<int>() };
            case TaskKind::BoxNet:
            {
                BoxNetPayload p;
                p.rows = j.at("rows").get<int>();
                p.cols = j.at("cols").get<int>();
                for (const auto& b: j.at("boxes"))
                    p.boxes.push_back({ b.at("color").get<std::string>(), cell_from(b.at("cell")),
                                        b.value("on_goal", false) });
                for (const auto& g: j.at("goals"))
                    p.goals.push_back({ g.at("color").get<std::string>(), cell_from(g.at("cell")) });
                return p;
            }
            case TaskKind::Blocksworld:
                return BlocksworldPayload { j.at("initial").get<BlockConfig>(), j.at("goal").get<BlockConfig>() };
            case TaskKind::PathPlan:
            {
                PathPlanPayload p;
                p.side = j.at("side").get<int>();
                p.start = cell_from(j.at("start"));
                p.goal = cell_from(j.at("goal"));
                for (const auto& c: j.at("obstacles"))
                    p.obstacles.push_back(cell_from(c));
                return p;
            }
            default:
                return DatasetPayload { j.at("gold").get<std::string>(),
                                        j.value("options", std::vector<std::string> {}) };
        }
    }

} // namespace

bool is_procedural(TaskKind kind) noexcept
{
    switch (kind)
    {
        case TaskKind::NumberMultiply:
        case TaskKind::Game24:
        case TaskKind::PathPlan:
        case TaskKind::Letters:
        case TaskKind::BoxLift:
        case TaskKind::BoxNet:
        case TaskKind::Blocksworld: return true;
        default: return false;
    }
}

std::string_view task_name(TaskKind kind) noexcept
{
    for (const auto& info: kind_table)
        if (info.kind == kind)
            return info.name;
    return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name)
{
    for (const auto& info: kind_table)
        if (info.name == name)
            return info.kind;
    return std::nullopt;
}

UnsupportedKind::UnsupportedKind(TaskKind kind):
    TaskError(fmt::format("task kind '{}' is dataset-backed and cannot be generated", task_name(kind)))
{
}

std::string complexity_label(const Complexity& complexity)
{
    return std::visit(
        [](const auto& c) -> std::string {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, MultiplyComplexity>)
                return fmt::format("{}_{}", c.d1, c.d2);
            else if constexpr (std::is_same_v<T, Game24Complexity>)
                return fmt::format("{}", c.n_terms);
            else if constexpr (std::is_same_v<T, LettersComplexity>)
                return fmt::format("{}", c.word_length);
            else if constexpr (std::is_same_v<T, BoxLiftComplexity>)
                return fmt::format("{}_{}", c.n_boxes, c.n_lifters);
            else if constexpr (std::is_same_v<T, BoxNetComplexity>)
                return fmt::format("{}_{}_{}", c.rows, c.cols, c.n_boxes);
            else if constexpr (std::is_same_v<T, BlocksworldComplexity>)
                return fmt::format("{}", c.n_blocks);
            else
                return fmt::format("{}_{}", c.grid_side, c.n_obstacles);
        },
        complexity);
}

std::vector<int> complexity_key(const Complexity& complexity)
{
    auto label = complexity_label(complexity);
    return label.empty() ? std::vector<int> {} : split_ints(label);
}

Complexity parse_complexity(TaskKind kind, std::string_view label)
{
    if (!is_procedural(kind))
    {
        if (!label.empty())
            throw InvalidComplexity(fmt::format("dataset kind '{}' takes no complexity", task_name(kind)));
        return std::monostate {};
    }
    auto v = split_ints(label);
    auto arity = [&](std::size_t n) {
        if (v.size() != n)
            throw InvalidComplexity(
                fmt::format("'{}' expects {} parameter(s) for {}, got '{}'", label, n, task_name(kind), label));
    };
    Complexity c;
    switch (kind)
    {
        case TaskKind::NumberMultiply: arity(2); c = MultiplyComplexity { v[0], v[1] }; break;
        case TaskKind::Game24: arity(1); c = Game24Complexity { v[0] }; break;
        case TaskKind::Letters: arity(1); c = LettersComplexity { v[0] }; break;
        case TaskKind::BoxLift: arity(2); c = BoxLiftComplexity { v[0], v[1] }; break;
        case TaskKind::BoxNet: arity(3); c = BoxNetComplexity { v[0], v[1], v[2] }; break;
        case TaskKind::Blocksworld: arity(1); c = BlocksworldComplexity { v[0] }; break;
        case TaskKind::PathPlan: arity(2); c = PathPlanComplexity { v[0], v[1] }; break;
        default: break;
    }
    validate_complexity(kind, c);
    return c;
}

void validate_complexity(TaskKind kind, const Complexity& complexity)
{
    auto wrong_kind = [&] {
        throw InvalidComplexity(fmt::format("complexity record does not match task kind '{}'", task_name(kind)));
    };
    switch (kind)
    {
        case TaskKind::NumberMultiply:
        {
            auto* c = std::get_if<MultiplyComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->d1 >= 1 && c->d1 <= 64 && c->d2 >= 1 && c->d2 <= 64, "digit counts must lie in [1, 64]");
            return;
        }
        case TaskKind::Game24:
        {
            auto* c = std::get_if<Game24Complexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->n_terms >= 2 && c->n_terms <= 8, "Game 24 n_terms must lie in [2, 8]");
            return;
        }
        case TaskKind::Letters:
        {
            auto* c = std::get_if<LettersComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->word_length >= 1 && c->word_length <= 256, "word_length must lie in [1, 256]");
            return;
        }
        case TaskKind::BoxLift:
        {
            auto* c = std::get_if<BoxLiftComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->n_boxes >= 1 && c->n_lifters >= 1, "box and lifter counts must be at least 1");
            require(c->n_boxes <= 200 && c->n_lifters <= 50, "BoxLift instance too large");
            return;
        }
        case TaskKind::BoxNet:
        {
            auto* c = std::get_if<BoxNetComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->rows >= 1 && c->cols >= 1 && c->n_boxes >= 1, "rows, cols and n_boxes must be at least 1");
            require(c->rows <= 16 && c->cols <= 16, "BoxNet grid too large");
            require(c->n_boxes <= 10, "BoxNet supports at most 10 boxes (one per color)");
            return;
        }
        case TaskKind::Blocksworld:
        {
            auto* c = std::get_if<BlocksworldComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->n_blocks >= 1 && c->n_blocks <= 26, "n_blocks must lie in [1, 26]");
            return;
        }
        case TaskKind::PathPlan:
        {
            auto* c = std::get_if<PathPlanComplexity>(&complexity);
            if (!c)
                wrong_kind();
            require(c->grid_side >= 1 && c->grid_side <= 64, "grid_side must lie in [1, 64]");
            require(c->n_obstacles >= 0 && c->n_obstacles <= c->grid_side * c->grid_side - 2 + (c->grid_side == 1),
                    "too many obstacles for the grid");
            return;
        }
        default:
            if (!std::holds_alternative<std::monostate>(complexity))
                wrong_kind();
    }
}

std::string_view failure_name(FailureReason reason) noexcept
{
    return failure_names[static_cast<int>(reason)];
}

std::optional<FailureReason> parse_failure_reason(std::string_view name)
{
    for (std::size_t i = 0; i < std::size(failure_names); ++i)
        if (failure_names[i] == name)
            return static_cast<FailureReason>(i);
    return std::nullopt;
}

std::string reference_answer(const TaskInstance& instance)
{
    return std::visit(
        [&](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, MultiplyPayload>)
                return expr::BigInt(p.lhs * p.rhs).str();
            else if constexpr (std::is_same_v<T, Game24Payload>)
                return solve_game24_bruteforce(p.values).value_or("") + " = 24";
            else if constexpr (std::is_same_v<T, LettersPayload>)
            {
                std::vector<std::size_t> positions;
                for (std::size_t i = 0; i < p.word.size(); ++i)
                    if (p.word[i] == p.letter)
                        positions.push_back(i + 1);
                return fmt::format("{}, at positions {}", positions.size(), fmt::join(positions, ", "));
            }
            else if constexpr (std::is_same_v<T, BoxLiftPayload>)
                return boxlift::format_schedule(boxlift::greedy_schedule(p.weights, p.capacities));
            else if constexpr (std::is_same_v<T, BoxNetPayload>)
                return boxnet::format_plan(boxnet::reference_plan(p));
            else if constexpr (std::is_same_v<T, BlocksworldPayload>)
            {
                if (blocksworld::block_names(p.initial).size() > 6)
                    return "";
                auto plan = blocksworld::solve_bfs(p.initial, p.goal);
                return plan ? blocksworld::format_plan(*plan) : "";
            }
            else if constexpr (std::is_same_v<T, PathPlanPayload>)
            {
                auto path = pathplan::shortest_path(p);
                return path ? pathplan::format_path(*path) : "";
            }
            else
                return p.gold;
        },
        instance.payload);
}

nlohmann::json to_json(const TaskInstance& instance)
{
    nlohmann::json j;
    j["question"] = instance.prompt;
    j["answer"] = reference_answer(instance);
    if (const auto* d = std::get_if<DatasetPayload>(&instance.payload); d && !d->options.empty())
        j["options"] = d->options;
    j["id"] = instance.id;
    j["kind"] = std::string(task_name(instance.kind));
    j["complexity"] = complexity_label(instance.complexity);
    j["seed"] = instance.seed;
    j["payload"] = payload_json(instance.payload);
    return j;
}

TaskInstance instance_from_json(const nlohmann::json& j)
{
    TaskInstance instance;
    auto kind = parse_task_kind(j.at("kind").get<std::string>());
    if (!kind)
        throw TaskError("unknown task kind '" + j.at("kind").get<std::string>() + "'");
    instance.kind = *kind;
    instance.id = j.value("id", "");
    instance.complexity = parse_complexity(*kind, j.value("complexity", ""));
    instance.seed = j.value("seed", std::uint64_t { 0 });
    instance.prompt = j.at("question").get<std::string>();
    instance.payload = payload_from(*kind, j.at("payload"));
    return instance;
}

nlohmann::json to_json(const Verdict& verdict)
{
    nlohmann::json j = { { "success", verdict.success }, { "partial_score", verdict.partial_score } };
    j["failure_reason"] = verdict.failure_reason ? nlohmann::json(std::string(failure_name(*verdict.failure_reason)))
                                                 : nlohmann::json(nullptr);
    return j;
}

Verdict verdict_from_json(const nlohmann::json& j)
{
    Verdict v;
    v.success = j.at("success").get<bool>();
    v.partial_score = j.at("partial_score").get<double>();
    if (j.contains("failure_reason") && j["failure_reason"].is_string())
        v.failure_reason = parse_failure_reason(j["failure_reason"].get<std::string>());
    return v;
}

} // namespace steerbench::tasks
