// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/verify.hpp>

#include <steerbench/expr/ast.hpp>
#include <steerbench/tasks/blocksworld.hpp>
#include <steerbench/tasks/extract.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace steerbench::tasks
{

namespace
{

    bool is_digit(char c) { return c >= '0' && c <= '9'; }

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

    std::vector<std::string_view> lines_of(std::string_view text)
    {
        std::vector<std::string_view> out;
        std::size_t pos = 0;
        while (true)
        {
            auto nl = text.find('\n', pos);
            out.push_back(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
            if (nl == std::string_view::npos)
                break;
            pos = nl + 1;
        }
        return out;
    }

    void replace_all(std::string& s, std::string_view from, std::string_view to)
    {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos)
        {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    }

    template <typename Fn>
    Verdict guarded(Fn&& fn)
    {
        try
        {
            return fn();
        }
        catch (...)
        {
            return Verdict::fail(FailureReason::ParseError);
        }
    }

    // Integers appearing in text, signed when a minus sign directly precedes them.
    std::vector<long long> small_ints(std::string_view text)
    {
        std::vector<long long> out;
        std::size_t i = 0;
        while (i < text.size())
        {
            if (!is_digit(text[i]))
            {
                ++i;
                continue;
            }
            bool negative = i > 0 && text[i - 1] == '-';
            long long value = 0;
            std::size_t j = i;
            while (j < text.size() && is_digit(text[j]))
            {
                if (value < 1'000'000'000)
                    value = value * 10 + (text[j] - '0');
                ++j;
            }
            out.push_back(negative ? -value : value);
            i = j;
        }
        return out;
    }

    // ---- exact-answer kinds -------------------------------------------------

    Verdict verify_multiply(const MultiplyPayload& p, std::string_view answer)
    {
        auto got = extract::last_integer(answer);
        if (!got)
            return Verdict::fail(FailureReason::NoAnswer);
        return *got == expr::BigInt(p.lhs * p.rhs) ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
    }

    Verdict verify_letters(const LettersPayload& p, std::string_view answer)
    {
        std::vector<long long> gold_positions;
        for (std::size_t i = 0; i < p.word.size(); ++i)
            if (p.word[i] == p.letter)
                gold_positions.push_back(static_cast<long long>(i) + 1);
        auto gold_count = static_cast<long long>(gold_positions.size());

        auto ints = small_ints(answer);
        if (ints.empty())
            return Verdict::fail(FailureReason::NoAnswer);
        auto n = static_cast<long long>(ints.size());

        auto matches = [&](long long count, std::vector<long long> positions) {
            std::sort(positions.begin(), positions.end());
            return count == gold_count && positions == gold_positions;
        };
        // Count followed by exactly that many positions, taking the last such split.
        for (long long i = n - 1; i >= 0; --i)
        {
            if (ints[static_cast<std::size_t>(i)] == n - i - 1)
            {
                std::vector<long long> positions(ints.begin() + i + 1, ints.end());
                return matches(ints[static_cast<std::size_t>(i)], positions) ? Verdict::pass()
                                                                             : Verdict::fail(FailureReason::WrongValue);
            }
        }
        // Positions followed by the count.
        if (ints.back() == n - 1)
        {
            std::vector<long long> positions(ints.begin(), ints.end() - 1);
            return matches(ints.back(), positions) ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
        }
        return Verdict::fail(FailureReason::WrongValue);
    }

    std::optional<char> option_letter_of(std::string_view gold)
    {
        auto g = trim(gold);
        if (g.size() == 3 && g[0] == '(' && g[2] == ')' && std::isupper(static_cast<unsigned char>(g[1])))
            return g[1];
        if (g.size() == 1 && std::isupper(static_cast<unsigned char>(g[0])))
            return g[0];
        return std::nullopt;
    }

    const std::vector<std::string> label_words = { "yes", "no", "true", "false", "valid", "invalid" };

    std::string normalized_text(std::string_view s)
    {
        std::string out;
        bool space = false;
        for (char c: lower(trim(s)))
        {
            if (std::isspace(static_cast<unsigned char>(c)))
                space = true;
            else
            {
                if (space && !out.empty())
                    out.push_back(' ');
                space = false;
                out.push_back(c);
            }
        }
        while (!out.empty() && (out.back() == '.' || out.back() == '!'))
            out.pop_back();
        return out;
    }

    Verdict verify_choice(const DatasetPayload& p, std::string_view answer)
    {
        if (auto gold_letter = option_letter_of(p.gold))
        {
            auto got = extract::last_option_letter(answer);
            if (!got)
            {
                auto t = trim(answer);
                if (t.size() == 1 && std::isupper(static_cast<unsigned char>(t[0])))
                    got = t[0];
            }
            if (!got)
                return Verdict::fail(FailureReason::NoAnswer);
            return *got == *gold_letter ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
        }
        auto gold = normalized_text(p.gold);
        if (std::find(label_words.begin(), label_words.end(), gold) != label_words.end())
        {
            auto got = extract::last_word_of(answer, label_words);
            if (!got)
                return Verdict::fail(FailureReason::NoAnswer);
            return *got == gold ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
        }
        if (trim(answer).empty())
            return Verdict::fail(FailureReason::NoAnswer);
        auto lines = lines_of(answer);
        for (auto it = lines.rbegin(); it != lines.rend(); ++it)
        {
            if (trim(*it).empty())
                continue;
            return normalized_text(*it) == gold ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
        }
        return Verdict::fail(FailureReason::NoAnswer);
    }

    Verdict verify_numeric(const DatasetPayload& p, std::string_view answer)
    {
        auto gold_text = extract::canonical_numeric_text(p.gold);
        auto gold = expr::parse_number(gold_text);
        if (!gold)
        {
            // Symbolic gold answers (radicals, pi) fall back to canonical text equality.
            std::string got;
            if (auto boxed = extract::last_boxed(answer))
                got = extract::canonical_numeric_text(*boxed);
            else
            {
                auto lines = lines_of(answer);
                for (auto it = lines.rbegin(); it != lines.rend() && got.empty(); ++it)
                    got = extract::canonical_numeric_text(*it);
            }
            if (got.empty())
                return Verdict::fail(FailureReason::NoAnswer);
            auto squash = [](std::string s) {
                s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                        s.end());
                return s;
            };
            return squash(got) == squash(gold_text) ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
        }
        auto got = extract::last_number(answer);
        if (!got)
            return Verdict::fail(FailureReason::NoAnswer);
        return *got == *gold ? Verdict::pass() : Verdict::fail(FailureReason::WrongValue);
    }

    // ---- Game 24 ------------------------------------------------------------

    bool expression_char(char c)
    {
        return is_digit(c) || c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')' || c == ' '
            || c == '\t' || c == '=';
    }

    std::string normalize_operators(std::string_view text)
    {
        std::string s(text);
        replace_all(s, "\xC3\x97", "*");
        replace_all(s, "\xC3\xB7", "/");
        replace_all(s, "\xE2\x88\x92", "-");
        replace_all(s, "\\times", "*");
        replace_all(s, "\\cdot", "*");
        replace_all(s, "\\div", "/");
        replace_all(s, "\\left", "");
        replace_all(s, "\\right", "");
        replace_all(s, "\\(", " ");
        replace_all(s, "\\)", " ");
        replace_all(s, "\\[", " ");
        replace_all(s, "\\]", " ");
        return s;
    }

    std::string_view strip_unbalanced(std::string_view s)
    {
        s = trim(s);
        while (!s.empty())
        {
            int balance = 0;
            for (char c: s)
                balance += c == '(' ? 1 : c == ')' ? -1 : 0;
            if (balance > 0 && s.front() == '(')
                s = trim(s.substr(1));
            else if (balance < 0 && s.back() == ')')
                s = trim(s.substr(0, s.size() - 1));
            else
                break;
        }
        return s;
    }

    std::optional<expr::Ast> parse_candidate(std::string_view piece)
    {
        auto s = strip_unbalanced(piece);
        if (s.empty())
            return std::nullopt;
        try
        {
            auto ast = expr::parse(s);
            if (ast.is_leaf())
                return std::nullopt;
            return ast;
        }
        catch (const expr::SyntaxError&)
        {
            return std::nullopt;
        }
    }

    std::optional<expr::Ast> last_expression(std::string_view answer)
    {
        auto text = normalize_operators(answer);
        auto lines = lines_of(text);
        for (auto line = lines.rbegin(); line != lines.rend(); ++line)
        {
            std::string_view l = trim(*line);
            // strip list bullets
            if (l.size() > 1 && (l[0] == '-' || l[0] == '*') && l[1] == ' ')
                l.remove_prefix(2);

            std::vector<std::string_view> segments;
            std::size_t i = 0;
            while (i < l.size())
            {
                if (!expression_char(l[i]))
                {
                    ++i;
                    continue;
                }
                std::size_t j = i;
                while (j < l.size() && expression_char(l[j]))
                    ++j;
                segments.push_back(l.substr(i, j - i));
                i = j;
            }
            for (auto seg = segments.rbegin(); seg != segments.rend(); ++seg)
            {
                std::vector<std::string_view> pieces;
                std::size_t start = 0;
                for (std::size_t k = 0; k <= seg->size(); ++k)
                {
                    if (k == seg->size() || (*seg)[k] == '=')
                    {
                        pieces.push_back(seg->substr(start, k - start));
                        start = k + 1;
                    }
                }
                for (auto piece = pieces.rbegin(); piece != pieces.rend(); ++piece)
                    if (auto ast = parse_candidate(*piece))
                        return ast;
            }
        }
        return std::nullopt;
    }

    // ---- BoxLift ------------------------------------------------------------

    struct ParsedTuple
    {
        long long weight = 0;
        std::vector<long long> lifters;
    };

    class TupleScanner
    {
    public:
        explicit TupleScanner(std::string_view s): _s(s) {}

        // Returns false when the text from the current '(' is not a well-formed tuple.
        std::optional<std::vector<ParsedTuple>> scan(bool& malformed)
        {
            std::vector<ParsedTuple> out;
            while (_i < _s.size())
            {
                if (_s[_i] != '(')
                {
                    ++_i;
                    continue;
                }
                std::size_t open = _i;
                ++_i;
                ParsedTuple t;
                if (auto w = integer(); w && expect(',') && expect('['))
                {
                    t.weight = *w;
                    bool ok = true;
                    skip();
                    if (_i < _s.size() && _s[_i] != ']')
                    {
                        while (true)
                        {
                            auto idx = integer();
                            if (!idx)
                            {
                                ok = false;
                                break;
                            }
                            t.lifters.push_back(*idx);
                            skip();
                            if (_i < _s.size() && _s[_i] == ',')
                            {
                                ++_i;
                                continue;
                            }
                            break;
                        }
                    }
                    if (ok && expect(']') && expect(')'))
                    {
                        out.push_back(std::move(t));
                        continue;
                    }
                }
                malformed = true;
                _i = open + 1;
            }
            return out;
        }

    private:
        void skip()
        {
            while (_i < _s.size() && (_s[_i] == ' ' || _s[_i] == '\t'))
                ++_i;
        }

        bool expect(char c)
        {
            skip();
            if (_i < _s.size() && _s[_i] == c)
            {
                ++_i;
                return true;
            }
            return false;
        }

        std::optional<long long> integer()
        {
            skip();
            bool negative = false;
            if (_i < _s.size() && _s[_i] == '-')
            {
                negative = true;
                ++_i;
            }
            std::size_t start = _i;
            long long v = 0;
            while (_i < _s.size() && is_digit(_s[_i]))
            {
                if (v < 1'000'000'000)
                    v = v * 10 + (_s[_i] - '0');
                ++_i;
            }
            if (_i == start)
                return std::nullopt;
            return negative ? -v : v;
        }

        std::string_view _s;
        std::size_t _i = 0;
    };

    struct StepLine
    {
        long long label;
        std::string_view body;
    };

    std::optional<StepLine> step_line(std::string_view line)
    {
        auto lc = lower(line);
        auto at = lc.find("step");
        if (at == std::string::npos)
            return std::nullopt;
        std::size_t i = at + 4;
        while (i < lc.size() && lc[i] == ' ')
            ++i;
        std::size_t start = i;
        long long label = 0;
        while (i < lc.size() && is_digit(lc[i]))
        {
            if (label < 1'000'000)
                label = label * 10 + (lc[i] - '0');
            ++i;
        }
        if (i == start)
            return std::nullopt;
        while (i < lc.size() && lc[i] == ' ')
            ++i;
        if (i >= lc.size() || lc[i] != ':')
            return std::nullopt;
        return StepLine { label, line.substr(i + 1) };
    }

} // namespace

Verdict verify_exact(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        switch (instance.kind)
        {
            case TaskKind::NumberMultiply: return verify_multiply(std::get<MultiplyPayload>(instance.payload), answer);
            case TaskKind::Letters: return verify_letters(std::get<LettersPayload>(instance.payload), answer);
            case TaskKind::DateUnderstanding:
            case TaskKind::WebOfLies:
            case TaskKind::LogicalDeduction:
            case TaskKind::Navigate: return verify_choice(std::get<DatasetPayload>(instance.payload), answer);
            case TaskKind::GsmHard:
            case TaskKind::MathGeometry:
            case TaskKind::MathCountProb: return verify_numeric(std::get<DatasetPayload>(instance.payload), answer);
            default: return Verdict::fail(FailureReason::ParseError);
        }
    });
}

Verdict verify_game24(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        const auto& p = std::get<Game24Payload>(instance.payload);
        auto ast = last_expression(answer);
        if (!ast)
            return Verdict::fail(FailureReason::NoAnswer);

        std::vector<expr::BigInt> expected;
        for (int v: p.values)
            expected.emplace_back(v);
        std::sort(expected.begin(), expected.end());
        if (expr::leaf_multiset(*ast) != expected)
            return Verdict::fail(FailureReason::ConstraintViolated);
        try
        {
            return expr::eval_exact(*ast) == expr::Rational(24) ? Verdict::pass()
                                                                  : Verdict::fail(FailureReason::WrongValue);
        }
        catch (const expr::DivisionByZero&)
        {
            return Verdict::fail(FailureReason::WrongValue);
        }
    });
}

Verdict verify_boxlift(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        const auto& p = std::get<BoxLiftPayload>(instance.payload);
        if (p.weights.empty())
            return Verdict::pass();

        // A restarted step numbering begins a new plan; the last plan wins.
        std::vector<std::vector<ParsedTuple>> plan;
        bool malformed = false;
        long long previous_label = 0;
        for (auto line: lines_of(answer))
        {
            auto step = step_line(line);
            if (!step)
                continue;
            if (step->label <= previous_label)
            {
                plan.clear();
                malformed = false;
            }
            previous_label = step->label;
            bool line_malformed = false;
            auto tuples = TupleScanner(step->body).scan(line_malformed);
            malformed = malformed || line_malformed;
            plan.push_back(tuples ? *tuples : std::vector<ParsedTuple> {});
        }
        if (plan.empty())
            return Verdict::fail(FailureReason::NoAnswer);

        std::map<long long, int> remaining;
        for (int w: p.weights)
            ++remaining[w];
        std::size_t lifted = 0;
        bool illegal = malformed;
        bool violated = false;
        bool over_limit = false;
        auto n_lifters = static_cast<long long>(p.capacities.size());

        for (std::size_t s = 0; s < plan.size(); ++s)
        {
            if (static_cast<long long>(s) >= p.step_limit)
            {
                over_limit = true;
                break;
            }
            std::set<long long> used;
            for (const auto& t: plan[s])
            {
                bool valid = !t.lifters.empty();
                std::set<long long> mine;
                for (auto idx: t.lifters)
                    if (idx < 0 || idx >= n_lifters || used.contains(idx) || !mine.insert(idx).second)
                        valid = false;
                if (!valid)
                {
                    illegal = true;
                    continue;
                }
                used.insert(mine.begin(), mine.end());
                auto box = remaining.find(t.weight);
                if (box == remaining.end() || box->second == 0)
                {
                    violated = true;
                    continue;
                }
                long long capacity = 0;
                for (auto idx: t.lifters)
                    capacity += p.capacities[static_cast<std::size_t>(idx)];
                if (capacity < t.weight)
                {
                    violated = true;
                    continue;
                }
                --box->second;
                ++lifted;
            }
        }

        double score = static_cast<double>(lifted) / static_cast<double>(p.weights.size());
        if (lifted == p.weights.size())
            return Verdict::pass();
        if (over_limit)
            return Verdict::fail(FailureReason::StepLimitExceeded, score);
        if (illegal)
            return Verdict::fail(FailureReason::IllegalMove, score);
        if (violated)
            return Verdict::fail(FailureReason::ConstraintViolated, score);
        return Verdict::fail(FailureReason::WrongValue, score);
    });
}

namespace
{

    // "[0.5, 1.5]" style coordinates following a prefix such as "Agent" or "square".
    std::optional<Cell> half_coordinates(std::string_view s)
    {
        auto open = s.find('[');
        auto close = s.find(']', open == std::string_view::npos ? 0 : open);
        if (open == std::string_view::npos || close == std::string_view::npos)
            return std::nullopt;
        auto inner = s.substr(open + 1, close - open - 1);
        auto comma = inner.find(',');
        if (comma == std::string_view::npos)
            return std::nullopt;
        auto x = expr::parse_number(inner.substr(0, comma));
        auto y = expr::parse_number(inner.substr(comma + 1));
        if (!x || !y)
            return std::nullopt;
        auto floor_of = [](const expr::Rational& r) -> std::optional<int> {
            if (r < expr::Rational(0) || r > expr::Rational(1000))
                return std::nullopt;
            expr::BigInt q = r.numerator() / r.denominator();
            return static_cast<int>(q);
        };
        auto row = floor_of(*x);
        auto col = floor_of(*y);
        if (!row || !col)
            return std::nullopt;
        return Cell { *row, *col };
    }

    std::vector<std::string> quoted_strings(std::string_view s)
    {
        std::vector<std::string> out;
        std::size_t i = 0;
        while (i < s.size())
        {
            char q = s[i];
            if (q != '"' && q != '\'')
            {
                ++i;
                continue;
            }
            auto end = s.find(q, i + 1);
            if (end == std::string_view::npos)
                break;
            out.emplace_back(s.substr(i + 1, end - i - 1));
            i = end + 1;
        }
        return out;
    }

    // Top-level {...} groups inside a bracket span.
    std::vector<std::string_view> brace_groups(std::string_view s)
    {
        std::vector<std::string_view> out;
        int depth = 0;
        std::size_t open = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            if (s[i] == '{' && depth++ == 0)
                open = i;
            else if (s[i] == '}' && depth > 0 && --depth == 0)
                out.push_back(s.substr(open, i - open + 1));
        }
        return out;
    }

} // namespace

Verdict verify_boxnet(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        const auto& p = std::get<BoxNetPayload>(instance.payload);
        struct BoxState
        {
            Cell cell;
            bool done;
        };
        std::map<std::string, BoxState> boxes;
        for (const auto& b: p.boxes)
            boxes[b.color] = { b.cell, b.on_goal };
        std::map<std::string, Cell> goals;
        for (const auto& g: p.goals)
            goals[g.color] = g.cell;

        auto score = [&] {
            if (boxes.empty())
                return 1.0;
            std::size_t done = 0;
            for (const auto& [color, b]: boxes)
                done += b.done ? 1 : 0;
            return static_cast<double>(done) / static_cast<double>(boxes.size());
        };

        std::string_view plan_text;
        for (auto span: extract::bracket_spans(answer))
            if (span.find("Agent[") != std::string_view::npos)
                plan_text = span;

        bool illegal = false;
        auto inside = [&](Cell c) { return c.row >= 0 && c.col >= 0 && c.row < p.rows && c.col < p.cols; };
        for (auto group: brace_groups(plan_text))
        {
            auto strings = quoted_strings(group);
            std::set<std::string> moved;
            std::set<std::pair<int, int>> acted;
            for (std::size_t k = 0; k + 1 < strings.size(); k += 2)
            {
                auto agent = half_coordinates(strings[k]);
                const auto& action = strings[k + 1];
                auto open = action.find("move(");
                auto comma = action.find(',', open == std::string::npos ? 0 : open);
                if (!agent || !inside(*agent) || open == std::string::npos || comma == std::string::npos
                    || acted.contains({ agent->row, agent->col }))
                {
                    illegal = true;
                    continue;
                }
                std::string box_name(trim(std::string_view(action).substr(open + 5, comma - open - 5)));
                std::string destination(trim(std::string_view(action).substr(comma + 1)));
                if (!destination.empty() && destination.back() == ')')
                    destination.pop_back();
                destination = std::string(trim(destination));

                if (!box_name.starts_with("box_") || !boxes.contains(box_name.substr(4)))
                {
                    illegal = true;
                    continue;
                }
                auto color = box_name.substr(4);
                auto& box = boxes[color];
                if (box.done || moved.contains(color) || !(box.cell == *agent))
                {
                    illegal = true;
                    continue;
                }
                if (destination.starts_with("target_"))
                {
                    auto goal = goals.find(destination.substr(7));
                    if (destination.substr(7) != color || goal == goals.end() || !(goal->second == *agent))
                    {
                        illegal = true;
                        continue;
                    }
                    box.done = true;
                }
                else if (destination.starts_with("square"))
                {
                    auto next = half_coordinates(destination);
                    if (!next || !inside(*next)
                        || std::abs(next->row - agent->row) + std::abs(next->col - agent->col) != 1)
                    {
                        illegal = true;
                        continue;
                    }
                    box.cell = *next;
                }
                else
                {
                    illegal = true;
                    continue;
                }
                moved.insert(color);
                acted.insert({ agent->row, agent->col });
            }
        }

        double s = score();
        if (s >= 1.0)
            return Verdict::pass();
        if (plan_text.empty())
            return Verdict::fail(FailureReason::NoAnswer, s);
        return Verdict::fail(illegal ? FailureReason::IllegalMove : FailureReason::WrongValue, s);
    });
}

Verdict verify_blocksworld(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        const auto& p = std::get<BlocksworldPayload>(instance.payload);
        auto names = blocksworld::block_names(p.initial);
        auto plan = blocksworld::parse_plan(answer, names);
        blocksworld::State state(p.initial);
        for (const auto& action: plan)
            if (!state.apply(action))
                return Verdict::fail(FailureReason::IllegalMove);
        if (state.hand_empty() && state.config() == blocksworld::canonical(p.goal))
            return Verdict::pass();
        return Verdict::fail(plan.empty() ? FailureReason::NoAnswer : FailureReason::WrongValue);
    });
}

Verdict verify_pathplan(const TaskInstance& instance, std::string_view answer)
{
    return guarded([&] {
        const auto& p = std::get<PathPlanPayload>(instance.payload);

        auto pairs_in = [](std::string_view s) {
            std::vector<Cell> cells;
            std::size_t i = 0;
            while (i < s.size())
            {
                char open = s[i];
                if (open != '(' && open != '[')
                {
                    ++i;
                    continue;
                }
                char close = open == '(' ? ')' : ']';
                auto end = s.find(close, i + 1);
                if (end == std::string_view::npos)
                    break;
                auto inner = s.substr(i + 1, end - i - 1);
                auto ints = small_ints(inner);
                bool simple = std::all_of(inner.begin(), inner.end(), [](char c) {
                    return is_digit(c) || c == ',' || c == ' ' || c == '-';
                });
                if (simple && ints.size() == 2 && inner.find(',') != std::string_view::npos)
                {
                    cells.push_back({ static_cast<int>(ints[0]), static_cast<int>(ints[1]) });
                    i = end + 1;
                }
                else
                    ++i;
            }
            return cells;
        };

        std::vector<Cell> path;
        for (auto span: extract::bracket_spans(answer))
        {
            auto inner = span.substr(1, span.size() - 2);
            auto cells = pairs_in(inner);
            if (!cells.empty())
                path = std::move(cells);
        }
        if (path.empty())
            path = pairs_in(answer);
        if (path.empty())
            return Verdict::fail(FailureReason::NoAnswer);

        std::set<Cell> obstacles(p.obstacles.begin(), p.obstacles.end());
        for (std::size_t i = 0; i < path.size(); ++i)
        {
            auto c = path[i];
            if (c.row < 0 || c.col < 0 || c.row >= p.side || c.col >= p.side || obstacles.contains(c))
                return Verdict::fail(FailureReason::IllegalMove);
            if (i > 0 && std::abs(c.row - path[i - 1].row) + std::abs(c.col - path[i - 1].col) != 1)
                return Verdict::fail(FailureReason::IllegalMove);
        }
        if (!(path.front() == p.start) || !(path.back() == p.goal))
            return Verdict::fail(FailureReason::WrongValue);
        return Verdict::pass();
    });
}

Verdict verify(const TaskInstance& instance, std::string_view answer)
{
    switch (instance.kind)
    {
        case TaskKind::Game24: return verify_game24(instance, answer);
        case TaskKind::BoxLift: return verify_boxlift(instance, answer);
        case TaskKind::BoxNet: return verify_boxnet(instance, answer);
        case TaskKind::Blocksworld: return verify_blocksworld(instance, answer);
        case TaskKind::PathPlan: return verify_pathplan(instance, answer);
        default: return verify_exact(instance, answer);
    }
}

} // namespace steerbench::tasks
