// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/tasks/task.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace steerbench::tasks::blocksworld
{

enum class Verb
{
    PickUp,
    Unstack,
    PutDown,
    Stack,
};

struct Action
{
    Verb verb = Verb::PickUp;
    std::string block;
    // Unstack: the block it is lifted from (empty = infer). Stack: the destination.
    std::string target;

    friend bool operator==(const Action&, const Action&) = default;
};

using Plan = std::vector<Action>;

std::string format_action(const Action& action);
std::string format_plan(const Plan& plan);

/// Parses one action per clause from lines starting with a verb ("pick up A",
/// "unstack A from on top of B", "put down A", "stack A on top of B"), also the
/// PDDL form "(unstack a b)". Only text after the last "[PLAN]" marker is read when
/// one is present. Block names are matched case-insensitively against `blocks`;
/// unknown names are kept verbatim so the simulator can reject them.
Plan parse_plan(std::string_view text, const std::vector<std::string>& blocks);

/// Block world state: what each block rests on ("" = table) and the held block.
class State
{
public:
    explicit State(const BlockConfig& config);

    /// Applies one action if its preconditions hold. Returns false (state unchanged) otherwise.
    bool apply(const Action& action);

    bool hand_empty() const noexcept { return _holding.empty(); }
    const std::string& holding() const noexcept { return _holding; }
    bool is_clear(const std::string& block) const;
    bool has_block(const std::string& block) const { return _on.contains(block); }
    /// Block directly beneath, "" for the table or an unknown block.
    std::string below(const std::string& block) const
    {
        auto it = _on.find(block);
        return it == _on.end() ? std::string() : it->second;
    }

    /// Canonical form: stacks bottom to top, sorted. Only meaningful with an empty hand.
    BlockConfig config() const;

    friend bool operator==(const State&, const State&) = default;

private:
    std::map<std::string, std::string> _on;
    std::string _holding;
};

/// Sorted, canonical form of a configuration so equal arrangements compare equal.
BlockConfig canonical(const BlockConfig& config);

std::vector<std::string> block_names(const BlockConfig& config);

/// Shortest plan by breadth-first search over configurations. Throws StateSpaceTooLarge
/// beyond six blocks.
std::optional<Plan> solve_bfs(const BlockConfig& initial, const BlockConfig& goal);

std::optional<Plan> solve_blocksworld_bfs(const TaskInstance& instance);

} // namespace steerbench::tasks::blocksworld
