// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/expr/rational.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace steerbench::tasks
{

enum class TaskKind
{
    NumberMultiply,
    Game24,
    PathPlan,
    Letters,
    BoxLift,
    BoxNet,
    Blocksworld,
    DateUnderstanding,
    WebOfLies,
    LogicalDeduction,
    Navigate,
    GsmHard,
    MathGeometry,
    MathCountProb,
};

inline constexpr TaskKind all_task_kinds[] = {
    TaskKind::NumberMultiply,    TaskKind::Game24,     TaskKind::PathPlan,         TaskKind::Letters,
    TaskKind::BoxLift,           TaskKind::BoxNet,     TaskKind::Blocksworld,      TaskKind::DateUnderstanding,
    TaskKind::WebOfLies,         TaskKind::LogicalDeduction, TaskKind::Navigate,   TaskKind::GsmHard,
    TaskKind::MathGeometry,      TaskKind::MathCountProb,
};

/// Generated procedurally (the first seven kinds) as opposed to loaded from a dataset file.
bool is_procedural(TaskKind kind) noexcept;
std::string_view task_name(TaskKind kind) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view name);

class TaskError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedKind: public TaskError
{
public:
    explicit UnsupportedKind(TaskKind kind);
};

class InvalidComplexity: public TaskError
{
public:
    using TaskError::TaskError;
};

class StateSpaceTooLarge: public TaskError
{
public:
    using TaskError::TaskError;
};

// Complexity parameters, one record per procedural kind.
struct MultiplyComplexity { int d1 = 1; int d2 = 1; };
struct Game24Complexity { int n_terms = 4; };
struct LettersComplexity { int word_length = 10; };
struct BoxLiftComplexity { int n_boxes = 10; int n_lifters = 4; };
struct BoxNetComplexity { int rows = 2; int cols = 2; int n_boxes = 2; };
struct BlocksworldComplexity { int n_blocks = 3; };
struct PathPlanComplexity { int grid_side = 5; int n_obstacles = 4; };

using Complexity = std::variant<std::monostate, MultiplyComplexity, Game24Complexity, LettersComplexity,
                                BoxLiftComplexity, BoxNetComplexity, BlocksworldComplexity, PathPlanComplexity>;

/// Underscore-joined parameters, e.g. "3_4" for a 3-digit by 4-digit product. Empty for datasets.
std::string complexity_label(const Complexity& complexity);
/// Parameter tuple used to order complexity levels.
std::vector<int> complexity_key(const Complexity& complexity);
/// Inverse of complexity_label for the given kind. Throws InvalidComplexity.
Complexity parse_complexity(TaskKind kind, std::string_view label);
/// Throws InvalidComplexity when the record does not belong to kind or is out of range.
void validate_complexity(TaskKind kind, const Complexity& complexity);

struct Cell
{
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Stacks of block names, each listed bottom to top.
using BlockConfig = std::vector<std::vector<std::string>>;

struct MultiplyPayload { expr::BigInt lhs; expr::BigInt rhs; };
struct Game24Payload { std::vector<int> values; };
struct LettersPayload { std::string word; char letter = 'a'; };
struct BoxLiftPayload
{
    std::vector<int> weights;
    std::vector<int> capacities;
    int step_limit = 0;
};
struct BoxNetBox
{
    std::string color;
    Cell cell;
    bool on_goal = false;
};
struct BoxNetGoal
{
    std::string color;
    Cell cell;
};
struct BoxNetPayload
{
    int rows = 0;
    int cols = 0;
    std::vector<BoxNetBox> boxes;
    std::vector<BoxNetGoal> goals;
};
struct BlocksworldPayload
{
    BlockConfig initial;
    BlockConfig goal;
};
struct PathPlanPayload
{
    int side = 0;
    Cell start;
    Cell goal;
    std::vector<Cell> obstacles;
};
struct DatasetPayload
{
    std::string gold;
    std::vector<std::string> options;
};

using Payload = std::variant<std::monostate, MultiplyPayload, Game24Payload, LettersPayload, BoxLiftPayload,
                             BoxNetPayload, BlocksworldPayload, PathPlanPayload, DatasetPayload>;

struct TaskInstance
{
    std::string id;
    TaskKind kind = TaskKind::NumberMultiply;
    Complexity complexity;
    std::uint64_t seed = 0;
    std::string prompt;
    Payload payload;
};

enum class FailureReason
{
    ParseError,
    WrongValue,
    IllegalMove,
    ConstraintViolated,
    StepLimitExceeded,
    Timeout,
    NoAnswer,
};

std::string_view failure_name(FailureReason reason) noexcept;
std::optional<FailureReason> parse_failure_reason(std::string_view name);

struct Verdict
{
    bool success = false;
    double partial_score = 0.0;
    std::optional<FailureReason> failure_reason;

    static Verdict pass() { return { true, 1.0, std::nullopt }; }
    static Verdict fail(FailureReason reason, double partial = 0.0) { return { false, partial, reason }; }
};

/// Reference answer text for an instance (product, witness, gold label, reference plan...).
std::string reference_answer(const TaskInstance& instance);

// Instance dump format: {"question", "answer", "options"?, "id", "kind", "complexity", "seed", "payload"}.
nlohmann::json to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Verdict& verdict);
Verdict verdict_from_json(const nlohmann::json& j);

} // namespace steerbench::tasks
