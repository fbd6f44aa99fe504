// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/expr/rational.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Answer extraction. The last match in the text is taken as the answer, since reasoning
// traces mention intermediate values first.
namespace steerbench::tasks::extract
{

/// Every unsigned integer literal in order. "12,345" with well-formed grouping is one literal.
std::vector<expr::BigInt> integers(std::string_view text);
std::optional<expr::BigInt> last_integer(std::string_view text);

/// Letter of the last "(X)" option marker.
std::optional<char> last_option_letter(std::string_view text);

/// Last whole word (case-insensitive) among `words`, lowercased.
std::optional<std::string> last_word_of(std::string_view text, const std::vector<std::string>& words);

/// Contents of the last \boxed{...}.
std::optional<std::string> last_boxed(std::string_view text);

/// Strips LaTeX and formatting noise from a numeric answer: \boxed, $, %, \left/\right,
/// \frac{a}{b} -> a/b, thousands commas, trailing unit words.
std::string canonical_numeric_text(std::string_view text);

/// Final number of an answer: the last \boxed{} when present, else the last number literal.
std::optional<expr::Rational> last_number(std::string_view text);

/// Top-level [...] spans (nesting aware), in order of appearance.
std::vector<std::string_view> bracket_spans(std::string_view text);

} // namespace steerbench::tasks::extract
