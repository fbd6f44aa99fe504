// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>

namespace steerbench::tasks
{

/// Exhaustive search over operand orderings, {+,-,*,/} and parenthesizations under exact
/// rational arithmetic. Returns a witness expression equal to 24, or nullopt.
/// Expects 2 to 8 values.
std::optional<std::string> solve_game24_bruteforce(std::span<const int> values);

} // namespace steerbench::tasks
