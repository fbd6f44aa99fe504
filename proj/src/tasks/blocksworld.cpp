// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/blocksworld.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <unordered_map>

namespace steerbench::tasks::blocksworld
{

namespace
{

    std::string lower(std::string_view s)
    {
        std::string out(s);
        for (char& c: out)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

    std::string_view trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    }

    std::vector<std::string> words_of(std::string_view s)
    {
        std::vector<std::string> out;
        std::string current;
        for (char c: s)
        {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                current.push_back(c);
            else if (!current.empty())
            {
                out.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty())
            out.push_back(std::move(current));
        return out;
    }

    // Drops "1.", "2)", "-", "*", "Step 3:" and markdown emphasis from the front of a line.
    std::string strip_marker(std::string_view line)
    {
        std::string s;
        for (char c: line)
            if (c != '*' && c != '`')
                s.push_back(c);
        std::string_view v = trim(s);
        if (lower(v.substr(0, 4)) == "step")
        {
            auto colon = v.find(':');
            if (colon != std::string_view::npos && colon < 12)
                v = trim(v.substr(colon + 1));
        }
        std::size_t i = 0;
        while (i < v.size() && std::isdigit(static_cast<unsigned char>(v[i])))
            ++i;
        if (i > 0 && i < v.size() && (v[i] == '.' || v[i] == ')' || v[i] == ':'))
            v = trim(v.substr(i + 1));
        if (!v.empty() && (v.front() == '-' || v.front() == '+'))
            v = trim(v.substr(1));
        return std::string(v);
    }

    const std::set<std::string> filler = { "the", "block", "from", "on", "top", "of", "onto", "to", "table", "off", "it", "then" };

    struct VerbMatch
    {
        Verb verb;
        std::size_t words;
    };

    std::optional<VerbMatch> match_verb(const std::vector<std::string>& lw)
    {
        if (lw.empty())
            return std::nullopt;
        const auto& w0 = lw[0];
        std::string w1 = lw.size() > 1 ? lw[1] : "";
        if (w0 == "pick" && w1 == "up")
            return VerbMatch { Verb::PickUp, 2 };
        if (w0 == "pickup" || w0 == "pick-up")
            return VerbMatch { Verb::PickUp, 1 };
        if (w0 == "put" && w1 == "down")
            return VerbMatch { Verb::PutDown, 2 };
        if (w0 == "putdown" || w0 == "put-down")
            return VerbMatch { Verb::PutDown, 1 };
        if (w0 == "unstack")
            return VerbMatch { Verb::Unstack, 1 };
        if (w0 == "stack")
            return VerbMatch { Verb::Stack, 1 };
        return std::nullopt;
    }

    std::string resolve_name(const std::string& token, const std::vector<std::string>& blocks)
    {
        for (const auto& b: blocks)
            if (lower(b) == lower(token))
                return b;
        return token;
    }

    std::optional<Action> parse_clause(std::string_view clause, const std::vector<std::string>& blocks)
    {
        auto original = words_of(clause);
        std::vector<std::string> lw;
        for (const auto& w: original)
            lw.push_back(lower(w));
        while (!lw.empty() && (lw[0] == "then" || lw[0] == "and" || lw[0] == "next" || lw[0] == "finally"))
        {
            lw.erase(lw.begin());
            original.erase(original.begin());
        }
        auto verb = match_verb(lw);
        if (!verb)
            return std::nullopt;

        std::vector<std::string> args;
        for (std::size_t i = verb->words; i < original.size(); ++i)
        {
            bool known = std::any_of(blocks.begin(), blocks.end(), [&](const auto& b) { return lower(b) == lw[i]; });
            if (!known && filler.contains(lw[i]))
                continue;
            args.push_back(resolve_name(original[i], blocks));
        }
        Action action;
        action.verb = verb->verb;
        if (!args.empty())
            action.block = args[0];
        if (args.size() > 1 && (action.verb == Verb::Unstack || action.verb == Verb::Stack))
            action.target = args[1];
        return action;
    }

    std::vector<std::string_view> split_clauses(std::string_view line)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
        {
            if (i == line.size() || line[i] == ',' || line[i] == ';' || line[i] == '.')
            {
                out.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        // "unstack A from B and put down A": split further on connective words.
        std::vector<std::string_view> refined;
        for (auto clause: out)
        {
            std::size_t from = 0;
            auto lc = lower(clause);
            for (std::size_t i = 0; i < lc.size(); ++i)
            {
                for (std::string_view conj: { " then ", " and " })
                {
                    if (lc.compare(i, conj.size(), conj) == 0)
                    {
                        refined.push_back(clause.substr(from, i - from));
                        from = i + 1;
                    }
                }
            }
            refined.push_back(clause.substr(from));
        }
        return refined;
    }

    std::string state_key(const State& s)
    {
        std::string key;
        for (const auto& stack: s.config())
        {
            for (const auto& b: stack)
                key += b + ",";
            key += "|";
        }
        key += "h:" + s.holding();
        return key;
    }

    std::vector<Action> successors(const State& s, const std::vector<std::string>& blocks)
    {
        std::vector<Action> out;
        if (s.hand_empty())
        {
            for (const auto& b: blocks)
            {
                if (!s.is_clear(b))
                    continue;
                auto under = s.below(b);
                if (under.empty())
                    out.push_back({ Verb::PickUp, b, "" });
                else
                    out.push_back({ Verb::Unstack, b, under });
            }
        }
        else
        {
            out.push_back({ Verb::PutDown, s.holding(), "" });
            for (const auto& b: blocks)
                if (b != s.holding() && s.is_clear(b))
                    out.push_back({ Verb::Stack, s.holding(), b });
        }
        return out;
    }

} // namespace

std::string format_action(const Action& action)
{
    switch (action.verb)
    {
        case Verb::PickUp: return "pick up " + action.block;
        case Verb::PutDown: return "put down " + action.block;
        case Verb::Unstack: return "unstack " + action.block + " from on top of " + action.target;
        case Verb::Stack: return "stack " + action.block + " on top of " + action.target;
    }
    return "";
}

std::string format_plan(const Plan& plan)
{
    std::string out;
    for (const auto& a: plan)
        out += format_action(a) + "\n";
    return out;
}

Plan parse_plan(std::string_view text, const std::vector<std::string>& blocks)
{
    auto lowered = lower(text);
    if (auto marker = lowered.rfind("[plan]"); marker != std::string::npos)
    {
        text = text.substr(marker + 6);
        lowered = lowered.substr(marker + 6);
        if (auto end = lowered.find("[plan end]"); end != std::string::npos)
            text = text.substr(0, end);
    }

    Plan plan;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        auto stripped = strip_marker(line);
        std::string_view view = stripped;
        // PDDL form: (unstack a b)
        if (!view.empty() && view.front() == '(')
        {
            std::size_t i = 0;
            while (i < view.size())
            {
                auto open = view.find('(', i);
                if (open == std::string_view::npos)
                    break;
                auto close = view.find(')', open);
                if (close == std::string_view::npos)
                    break;
                if (auto a = parse_clause(view.substr(open + 1, close - open - 1), blocks))
                    plan.push_back(*a);
                i = close + 1;
            }
        }
        else
        {
            for (auto clause: split_clauses(view))
                if (auto a = parse_clause(clause, blocks))
                    plan.push_back(*a);
        }
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    return plan;
}

State::State(const BlockConfig& config)
{
    for (const auto& stack: config)
    {
        std::string below;
        for (const auto& b: stack)
        {
            _on[b] = below;
            below = b;
        }
    }
}

bool State::is_clear(const std::string& block) const
{
    if (!_on.contains(block) || _holding == block)
        return false;
    for (const auto& [b, under]: _on)
        if (under == block && b != _holding)
            return false;
    return true;
}

bool State::apply(const Action& action)
{
    const auto& x = action.block;
    if (x.empty() || !_on.contains(x))
        return false;
    switch (action.verb)
    {
        case Verb::PickUp:
            if (!hand_empty() || !_on[x].empty() || !is_clear(x))
                return false;
            _holding = x;
            return true;
        case Verb::Unstack:
        {
            if (!hand_empty() || !is_clear(x) || _on[x].empty())
                return false;
            if (!action.target.empty() && _on[x] != action.target)
                return false;
            _holding = x;
            _on[x] = "";
            return true;
        }
        case Verb::PutDown:
            if (_holding != x)
                return false;
            _on[x] = "";
            _holding.clear();
            return true;
        case Verb::Stack:
        {
            const auto& y = action.target;
            if (_holding != x || y == x || !_on.contains(y) || !is_clear(y))
                return false;
            _on[x] = y;
            _holding.clear();
            return true;
        }
    }
    return false;
}

BlockConfig State::config() const
{
    std::unordered_map<std::string, std::string> above;
    for (const auto& [b, under]: _on)
        if (b != _holding && !under.empty())
            above[under] = b;
    BlockConfig out;
    for (const auto& [b, under]: _on)
    {
        if (b == _holding || !under.empty())
            continue;
        std::vector<std::string> stack { b };
        for (auto it = above.find(b); it != above.end(); it = above.find(it->second))
            stack.push_back(it->second);
        out.push_back(std::move(stack));
    }
    std::sort(out.begin(), out.end());
    return out;
}

BlockConfig canonical(const BlockConfig& config)
{
    BlockConfig out;
    for (const auto& stack: config)
        if (!stack.empty())
            out.push_back(stack);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> block_names(const BlockConfig& config)
{
    std::vector<std::string> names;
    for (const auto& stack: config)
        names.insert(names.end(), stack.begin(), stack.end());
    std::sort(names.begin(), names.end());
    return names;
}

std::optional<Plan> solve_bfs(const BlockConfig& initial, const BlockConfig& goal)
{
    auto blocks = block_names(initial);
    if (blocks.size() > 6)
        throw StateSpaceTooLarge(fmt::format("breadth-first search is limited to 6 blocks, got {}", blocks.size()));
    if (blocks != block_names(goal))
        return std::nullopt;

    auto target = canonical(goal);
    State start(initial);
    if (start.config() == target)
        return Plan {};

    struct Visit
    {
        std::string parent;
        Action action;
    };
    std::unordered_map<std::string, Visit> seen;
    std::deque<State> queue;
    auto start_key = state_key(start);
    seen[start_key] = { "", {} };
    queue.push_back(start);

    while (!queue.empty())
    {
        State current = std::move(queue.front());
        queue.pop_front();
        auto current_key = state_key(current);
        for (const auto& action: successors(current, blocks))
        {
            State next = current;
            if (!next.apply(action))
                continue;
            auto key = state_key(next);
            if (seen.contains(key))
                continue;
            seen[key] = { current_key, action };
            if (next.hand_empty() && next.config() == target)
            {
                Plan plan;
                for (auto k = key; k != start_key; k = seen[k].parent)
                    plan.push_back(seen[k].action);
                std::reverse(plan.begin(), plan.end());
                return plan;
            }
            queue.push_back(std::move(next));
        }
    }
    return std::nullopt;
}

std::optional<Plan> solve_blocksworld_bfs(const TaskInstance& instance)
{
    const auto* payload = std::get_if<BlocksworldPayload>(&instance.payload);
    if (!payload)
        throw TaskError("instance is not a Blocksworld instance");
    return solve_bfs(payload->initial, payload->goal);
}

} // namespace steerbench::tasks::blocksworld
