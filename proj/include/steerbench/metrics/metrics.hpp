// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/steering/steering.hpp>
#include <steerbench/tasks/task.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerbench::metrics
{

class MetricsError: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class EmptyGroup: public MetricsError
{
public:
    using MetricsError::MetricsError;
};

class DegenerateTask: public MetricsError
{
public:
    using MetricsError::MetricsError;
};

class InvalidRecord: public MetricsError
{
public:
    using MetricsError::MetricsError;
};

/// One persisted attempt plus the context needed to aggregate it.
struct RunRecord
{
    steering::Attempt attempt;
    std::string model_id;
    tasks::TaskKind task = tasks::TaskKind::NumberMultiply;
    std::string complexity;
    std::string config_hash;
};

/// "instance_id|method|turn|config_hash"; unique per record in a run directory.
std::string record_key(const std::string& instance_id, steering::MethodId method, int turn,
                       const std::string& config_hash);
std::string record_key(const RunRecord& record);

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

/// Reads a line-delimited record file. Throws InvalidRecord with the line number.
std::vector<RunRecord> load_records(const std::filesystem::path& file);

/// For every (model, config, instance, method) the latest attempt with turn <= t.
/// Methods without refinement only have turn 1, so they look the same at every t.
std::vector<RunRecord> view_at_turn(std::span<const RunRecord> records, int turn);

int max_turn(std::span<const RunRecord> records);

/// 100 x mean partial score. Throws EmptyGroup on an empty cell.
double success_rate(std::span<const RunRecord> cell);

struct SuccessCell
{
    std::string model_id;
    tasks::TaskKind task;
    steering::MethodId method;
    int turn = 1;
    std::size_t attempts = 0;
    double percent = 0.0;
};

std::vector<SuccessCell> success_table(std::span<const RunRecord> records, int turn);

struct ScoreTable
{
    std::vector<std::string> tasks;
    std::vector<std::string> methods;
    /// scores[i][j]: task i, method j, in [0, 100]. NaN marks a missing cell.
    std::vector<std::vector<double>> scores;
};

struct AveNorm
{
    /// Unrounded, on the 0-100 scale, one entry per method.
    std::vector<double> scores;
    std::vector<std::string> excluded_tasks;
    std::vector<std::string> warnings;
};

/// Throws MetricsError on out-of-range entries and DegenerateTask when no task row survives.
AveNorm ave_norm(const ScoreTable& table);

/// Builds the panel for one model at a turn: rows are tasks, columns are methods.
ScoreTable score_table(std::span<const RunRecord> records, const std::string& model_id, int turn);

double round_half_even(double value, int decimals = 1);

struct Decomposition
{
    std::string model_id;
    tasks::TaskKind task;
    steering::MethodId method;
    std::size_t attempts = 0;
    double success = 0.0;
    double code_correct = 0.0;
    double code_wrong = 0.0;
    double text_correct = 0.0;
    double text_wrong = 0.0;
};

std::vector<Decomposition> decompose_modality(std::span<const RunRecord> records, int turn = 1);

struct UsageCell
{
    std::string model_id;
    steering::MethodId method;
    std::size_t attempts = 0;
    double percent = 0.0;
};

std::vector<UsageCell> code_usage_ratio(std::span<const RunRecord> records, int turn = 1);

struct ComplexityLevel
{
    steering::MethodId method;
    std::string label;
    std::vector<int> key;
    std::size_t attempts = 0;
    double success = 0.0;
    double code_usage = 0.0;
};

/// Throws MetricsError when the records mix task kinds or hold dataset tasks.
std::vector<ComplexityLevel> complexity_breakdown(std::span<const RunRecord> records, int turn = 1);

struct CostRow
{
    std::string model_id;
    steering::MethodId method;
    int turn = 1;
    std::string label;
    std::size_t attempts = 0;
    double ave_norm = 0.0;
    double avg_tokens = 0.0;
    double avg_runtime_ms = 0.0;
};

/// One row per (model, method, turn); ave_norm is normalized across all rows of the same model.
std::vector<CostRow> cost_table(std::span<const RunRecord> records);

struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);
std::string to_text(const Table& table);

inline constexpr std::string_view report_names[] = { "scores", "avenorm", "decomposition",
                                                     "usage",  "cost",    "complexity" };

bool is_report_name(std::string_view name);

struct Report
{
    Table table;
    std::vector<std::string> warnings;
};

/// Report tables as written by the command line. Throws MetricsError for unknown names.
Report build_report(std::string_view name, std::span<const RunRecord> records, int turn = 1);

} // namespace steerbench::metrics
