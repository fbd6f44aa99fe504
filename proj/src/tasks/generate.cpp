// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/blocksworld.hpp>
#include <steerbench/tasks/boxlift.hpp>
#include <steerbench/tasks/boxnet.hpp>
#include <steerbench/tasks/game24.hpp>
#include <steerbench/tasks/generate.hpp>
#include <steerbench/tasks/pathplan.hpp>

#include "rng.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <numeric>
#include <set>

namespace steerbench::tasks
{

namespace
{

    constexpr int max_generation_attempts = 10000;

    std::string instance_id(TaskKind kind, const Complexity& complexity, std::uint64_t seed)
    {
        return fmt::format("{}-{}-{}", task_name(kind), complexity_label(complexity), seed);
    }

    expr::BigInt random_digits(SeededRng& rng, int digits)
    {
        std::string s;
        s.push_back(static_cast<char>('0' + rng.between(1, 9)));
        for (int i = 1; i < digits; ++i)
            s.push_back(static_cast<char>('0' + rng.between(0, 9)));
        return expr::BigInt(s);
    }

    void make_multiply(TaskInstance& inst, const MultiplyComplexity& c, SeededRng& rng)
    {
        MultiplyPayload p { random_digits(rng, c.d1), random_digits(rng, c.d2) };
        inst.prompt = fmt::format("What is the product of {} and {}?", p.lhs.str(), p.rhs.str());
        inst.payload = std::move(p);
    }

    void make_game24(TaskInstance& inst, const Game24Complexity& c, SeededRng& rng)
    {
        for (int attempt = 0; attempt < max_generation_attempts; ++attempt)
        {
            std::vector<int> values;
            for (int i = 0; i < c.n_terms; ++i)
                values.push_back(rng.between(1, 13));
            if (!solve_game24_bruteforce(values))
                continue;
            inst.prompt = fmt::format(
                "Use the numbers {} and basic arithmetic operations (+ - * /) to obtain 24. Each number must be used "
                "exactly once. Give your final answer as an equation.",
                fmt::join(values, " "));
            inst.payload = Game24Payload { std::move(values) };
            return;
        }
        throw InvalidComplexity(fmt::format("no solvable Game 24 instance found for n_terms={}", c.n_terms));
    }

    void make_letters(TaskInstance& inst, const LettersComplexity& c, SeededRng& rng)
    {
        std::string word;
        for (int i = 0; i < c.word_length; ++i)
            word.push_back(static_cast<char>('a' + rng.between(0, 25)));
        char letter = word[rng.below(word.size())];
        inst.prompt = fmt::format("How many {}'s in the word {} and their positions?", letter, word);
        inst.payload = LettersPayload { std::move(word), letter };
    }

    constexpr std::string_view boxlift_template = R"(You are given a list of boxes with the following weights: [{weights}]
And a list of lifters with the following maximum lifting capacities: [{capacities}]

Your task is to assign the lifters to lift all the boxes in multiple steps, following these rules:
1. Multiple boxes can be lifted in each step.
2. Each lifter can only lift one box at a time.
3. Each lifting agent can be used only once in each step.
4. Multiple lifters can combine together to lift one box if the box is too heavy for a single lifter.
5. Try to lift all the boxes using the minimum number of steps possible.
6. You need to lift all the boxes in less than or equal to {steps} steps.

Please provide your solution in the following format:
Step 1: [(Box weight, [Lifter indices]), (Box weight, [Lifter indices]), ...]
Step 2: [(Box weight, [Lifter indices]), (Box weight, [Lifter indices]), ...]
...

For example:
Step 1: [(50, [0, 2]), (30, [1]), (20, [3])]
This means in Step 1, lifters 0 and 2 are lifting a box weighing 50, lifter 1 is lifting a box weighing 30, and lifter 3 is lifting a box weighing 20.

Ensure all boxes are lifted and provide the most efficient solution possible.

Your answer:)";

    void make_boxlift(TaskInstance& inst, const BoxLiftComplexity& c, SeededRng& rng)
    {
        std::vector<int> capacities;
        for (int i = 0; i < c.n_lifters; ++i)
            capacities.push_back(rng.between(40, 160));
        int total = std::accumulate(capacities.begin(), capacities.end(), 0);
        int heaviest = std::min(300, total);
        std::vector<int> weights;
        for (int i = 0; i < c.n_boxes; ++i)
            weights.push_back(rng.between(20, heaviest));
        int limit = boxlift::step_limit_for(weights, capacities);
        inst.prompt = fmt::format(fmt::runtime(boxlift_template), fmt::arg("weights", fmt::join(weights, ", ")),
                                  fmt::arg("capacities", fmt::join(capacities, ", ")), fmt::arg("steps", limit));
        inst.payload = BoxLiftPayload { std::move(weights), std::move(capacities), limit };
    }

    constexpr std::string_view box_colors[] = { "red", "blue", "green", "purple", "orange",
                                                "yellow", "black", "white", "pink", "brown" };

    void make_boxnet(TaskInstance& inst, const BoxNetComplexity& c, SeededRng& rng)
    {
        BoxNetPayload p;
        p.rows = c.rows;
        p.cols = c.cols;
        auto random_cell = [&] { return Cell { rng.between(0, c.rows - 1), rng.between(0, c.cols - 1) }; };
        for (int i = 0; i < c.n_boxes; ++i)
        {
            std::string color(box_colors[i]);
            p.boxes.push_back({ color, random_cell(), false });
            p.goals.push_back({ color, random_cell() });
        }

        std::string layout;
        for (int r = 0; r < c.rows; ++r)
        {
            for (int col = 0; col < c.cols; ++col)
            {
                std::vector<std::string> items;
                for (const auto& b: p.boxes)
                    if (b.cell == Cell { r, col })
                        items.push_back("box_" + b.color);
                for (const auto& g: p.goals)
                    if (g.cell == Cell { r, col })
                        items.push_back("target_" + g.color);
                layout += fmt::format("{}: [{}]\n", boxnet::square_name({ r, col }), fmt::join(items, ", "));
            }
        }
        inst.prompt = fmt::format(
            "You are directing robot arms on a {rows} x {cols} grid of squares. Each square holds one arm; the arm "
            "Agent[r.5, c.5] can only act inside square[r.5, c.5]. In one step every arm may perform at most one "
            "action:\n"
            "1. move a box in its square to a horizontally or vertically neighboring square, e.g. "
            "move(box_red, square[0.5, 1.5]);\n"
            "2. move a box in its square onto the target of the same color in that square, e.g. "
            "move(box_red, target_red).\n"
            "A box placed on its target is done and leaves the grid. Each box can be moved at most once per step.\n\n"
            "Current state (square: items):\n{layout}\n"
            "Move every box onto the target of its color in as few steps as possible. Give the plan as a list with one "
            "dictionary per step mapping agent names to actions, for example:\n"
            "[{{\"Agent[0.5, 0.5]\": \"move(box_red, square[0.5, 1.5])\"}}, "
            "{{\"Agent[0.5, 1.5]\": \"move(box_red, target_red)\"}}]",
            fmt::arg("rows", c.rows), fmt::arg("cols", c.cols), fmt::arg("layout", layout));
        inst.payload = std::move(p);
    }

    BlockConfig random_config(const std::vector<std::string>& names, SeededRng& rng)
    {
        std::vector<std::string> order = names;
        rng.shuffle(order);
        BlockConfig config;
        for (const auto& b: order)
        {
            std::uint64_t choice = rng.below(config.size() + 1);
            if (choice == config.size())
                config.push_back({ b });
            else
                config[choice].push_back(b);
        }
        return blocksworld::canonical(config);
    }

    std::string describe_config(const BlockConfig& config)
    {
        std::vector<std::string> facts;
        for (const auto& stack: config)
        {
            facts.push_back(fmt::format("{} is on the table", stack.front()));
            for (std::size_t i = 1; i < stack.size(); ++i)
                facts.push_back(fmt::format("{} is on top of {}", stack[i], stack[i - 1]));
        }
        return fmt::format("{}", fmt::join(facts, ", "));
    }

    void make_blocksworld(TaskInstance& inst, const BlocksworldComplexity& c, SeededRng& rng)
    {
        std::vector<std::string> names;
        for (int i = 0; i < c.n_blocks; ++i)
            names.push_back(std::string(1, static_cast<char>('A' + i)));
        BlockConfig initial = random_config(names, rng);
        BlockConfig goal = random_config(names, rng);
        for (int attempt = 0; goal == initial && c.n_blocks > 1 && attempt < max_generation_attempts; ++attempt)
            goal = random_config(names, rng);

        std::vector<std::string> clear;
        for (const auto& stack: initial)
            clear.push_back(stack.back());
        std::sort(clear.begin(), clear.end());
        std::vector<std::string> clear_facts;
        for (const auto& b: clear)
            clear_facts.push_back(b + " is clear");

        inst.prompt = fmt::format(
            "I am playing with a set of blocks where I need to arrange the blocks into stacks. I can do the following "
            "actions: pick up a block, unstack a block from on top of another block, put down a block, stack a block "
            "on top of another block.\n"
            "Restrictions: I can only pick up or unstack one block at a time, and only when my hand is empty. I can "
            "only pick up a block that is on the table and clear (no block on top of it and not held). I can only "
            "unstack a block from another block if it is really on top of that block and clear. Once I pick up or "
            "unstack a block I am holding it, and I can only put down or stack a block I am holding. I can only "
            "stack a block on top of another block if that block is clear. After putting down or stacking a block "
            "my hand is empty again.\n\n"
            "[STATEMENT]\n"
            "As initial conditions I have that, the hand is empty, {clear}, {initial}.\n"
            "My goal is to have that {goal}.\n\n"
            "Write one action per line, e.g. \"unstack A from on top of B\", between [PLAN] and [PLAN END].\n\n"
            "My plan is as follows:\n\n[PLAN]",
            fmt::arg("clear", fmt::join(clear_facts, ", ")), fmt::arg("initial", describe_config(initial)),
            fmt::arg("goal", describe_config(goal)));
        inst.payload = BlocksworldPayload { std::move(initial), std::move(goal) };
    }

    void make_pathplan(TaskInstance& inst, const PathPlanComplexity& c, SeededRng& rng)
    {
        int n = c.grid_side;
        for (int attempt = 0; attempt < max_generation_attempts; ++attempt)
        {
            std::vector<Cell> cells;
            for (int r = 0; r < n; ++r)
                for (int col = 0; col < n; ++col)
                    cells.push_back({ r, col });
            rng.shuffle(cells);
            PathPlanPayload p;
            p.side = n;
            p.start = cells[0];
            p.goal = cells.size() > 1 ? cells[1] : cells[0];
            std::size_t first_obstacle = cells.size() > 1 ? 2 : 1;
            p.obstacles.assign(cells.begin() + static_cast<std::ptrdiff_t>(first_obstacle),
                               cells.begin() + static_cast<std::ptrdiff_t>(first_obstacle + c.n_obstacles));
            std::sort(p.obstacles.begin(), p.obstacles.end());
            if (!pathplan::shortest_path(p))
                continue;

            std::vector<std::string> obstacle_text;
            for (auto o: p.obstacles)
                obstacle_text.push_back(fmt::format("({}, {})", o.row, o.col));
            inst.prompt = fmt::format(
                "A robot moves on a {n} x {n} grid. Cells are written as (row, column) with rows and columns numbered "
                "from 0 to {last}. The robot starts at ({sr}, {sc}) and must reach ({gr}, {gc}). Obstacles occupy "
                "the cells: [{obstacles}]. In each move the robot goes to a horizontally or vertically adjacent cell "
                "inside the grid that is not an obstacle. Plan the waypoints of the trajectory and output the full "
                "sequence of visited cells, including start and goal, as a list such as [(0, 0), (0, 1), (1, 1)].",
                fmt::arg("n", n), fmt::arg("last", n - 1), fmt::arg("sr", p.start.row), fmt::arg("sc", p.start.col),
                fmt::arg("gr", p.goal.row), fmt::arg("gc", p.goal.col),
                fmt::arg("obstacles", fmt::join(obstacle_text, ", ")));
            inst.payload = std::move(p);
            return;
        }
        throw InvalidComplexity(
            fmt::format("no connected PathPlan layout found for grid_side={} n_obstacles={}", n, c.n_obstacles));
    }

} // namespace

TaskInstance generate(TaskKind kind, const Complexity& complexity, std::uint64_t seed)
{
    if (!is_procedural(kind))
        throw UnsupportedKind(kind);
    validate_complexity(kind, complexity);

    TaskInstance inst;
    inst.id = instance_id(kind, complexity, seed);
    inst.kind = kind;
    inst.complexity = complexity;
    inst.seed = seed;
    SeededRng rng(seed);

    switch (kind)
    {
        case TaskKind::NumberMultiply: make_multiply(inst, std::get<MultiplyComplexity>(complexity), rng); break;
        case TaskKind::Game24: make_game24(inst, std::get<Game24Complexity>(complexity), rng); break;
        case TaskKind::Letters: make_letters(inst, std::get<LettersComplexity>(complexity), rng); break;
        case TaskKind::BoxLift: make_boxlift(inst, std::get<BoxLiftComplexity>(complexity), rng); break;
        case TaskKind::BoxNet: make_boxnet(inst, std::get<BoxNetComplexity>(complexity), rng); break;
        case TaskKind::Blocksworld: make_blocksworld(inst, std::get<BlocksworldComplexity>(complexity), rng); break;
        case TaskKind::PathPlan: make_pathplan(inst, std::get<PathPlanComplexity>(complexity), rng); break;
        default: throw UnsupportedKind(kind);
    }
    return inst;
}

} // namespace steerbench::tasks
