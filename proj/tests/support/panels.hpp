// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string_view>

namespace testkit
{

// Reference success-rate panels, 14 tasks by 10 methods, in method order 1..10.
struct PanelRow
{
    std::string_view task;
    std::array<double, 10> scores;
};

inline constexpr std::array<PanelRow, 14> gpt4o_panel { {
    { "number_multiply", { 37, 38, 100, 100, 100, 33, 84, 100, 99, 91 } },
    { "game24", { 17, 23, 5, 11, 88, 18, 18, 63, 33, 66 } },
    { "path_plan", { 65, 44, 71, 76, 79, 73, 54, 46, 66, 71 } },
    { "letters", { 24, 71, 100, 100, 100, 24, 89, 95, 98, 93 } },
    { "boxlift", { 69, 57, 30, 68, 21, 64, 50, 59, 65, 34 } },
    { "boxnet", { 37, 30, 37, 1, 12, 33, 37, 21, 23, 25 } },
    { "blocksworld", { 43, 52, 40, 32, 50, 44, 42, 49, 50, 50 } },
    { "date_understanding", { 90, 88, 64, 72, 65, 88, 76, 80, 86, 81 } },
    { "web_of_lies", { 96, 86, 79, 91, 78, 96, 94, 74, 77, 88 } },
    { "logical_deduction", { 89, 91, 79, 83, 82, 87, 82, 87, 94, 82 } },
    { "navigate", { 98, 95, 94, 99, 91, 97, 98, 97, 96, 99 } },
    { "gsm_hard", { 78, 80, 82, 83, 81, 78, 79, 78, 81, 79 } },
    { "math_geometry", { 76, 73, 68, 74, 73, 74, 73, 70, 77, 72 } },
    { "math_count_prob", { 89, 87, 84, 88, 91, 89, 89, 89, 86, 90 } },
} };

inline constexpr std::array<double, 10> gpt4o_expected { 80.6, 79.9, 80.3, 80.4, 84.5, 79.4, 83.5, 85.7, 88.2, 86.9 };

inline constexpr std::array<PanelRow, 14> gpt4o_mini_panel { {
    { "number_multiply", { 15, 26, 100, 100, 1, 15, 100, 100, 99, 42 } },
    { "game24", { 15, 16, 9, 10, 13, 14, 62, 83, 17, 23 } },
    { "path_plan", { 55, 21, 58, 49, 51, 57, 26, 26, 37, 37 } },
    { "letters", { 7, 78, 100, 100, 100, 7, 87, 89, 90, 51 } },
    { "boxlift", { 37.6, 41.7, 40.5, 26.4, 37.4, 39.4, 44.7, 64.8, 42.8, 38.2 } },
    { "boxnet", { 10.76, 21.94, 20.21, 0, 16.87, 13.18, 23.78, 4.17, 22.36, 23.34 } },
    { "blocksworld", { 17, 38, 17, 40, 40, 15, 17, 23, 38, 34 } },
    { "date_understanding", { 80, 85, 57, 70, 63, 80, 74, 77, 83, 82 } },
    { "web_of_lies", { 98, 81, 70, 93, 76, 96, 59, 52, 82, 83 } },
    { "logical_deduction", { 78, 80, 67, 73, 75, 76, 75, 78, 82, 73 } },
    { "navigate", { 96, 90, 89, 85, 55, 95, 94, 96, 95, 94 } },
    { "gsm_hard", { 73, 72, 77, 80, 68, 73, 73, 52, 77, 73 } },
    { "math_geometry", { 73, 72, 72, 74, 74, 76, 77, 81, 72, 74 } },
    { "math_count_prob", { 88, 92, 78, 83, 88, 88, 83, 87, 88, 87 } },
} };

inline constexpr std::array<double, 10> gpt4o_mini_expected { 67.6, 75.9, 77.4, 76.6, 71.8,
                                                              68.2, 80.8, 79.0, 85.0, 76.5 };

// Absolute tolerance on each one-decimal reference value.
inline constexpr double panel_tolerance = 0.3 + 1e-9;

} // namespace testkit
