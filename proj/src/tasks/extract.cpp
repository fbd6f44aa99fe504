// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/extract.hpp>

#include <algorithm>
#include <cctype>

namespace steerbench::tasks::extract
{

namespace
{

    bool is_digit(char c) { return c >= '0' && c <= '9'; }
    bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

    std::string lower(std::string_view s)
    {
        std::string out(s);
        for (char& c: out)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

    // Length of a run of comma-grouped digits starting at i ("12,345,678"), or of the
    // leading plain digits when the grouping is malformed.
    std::size_t grouped_digit_run(std::string_view s, std::size_t i)
    {
        std::size_t j = i;
        while (j < s.size() && is_digit(s[j]))
            ++j;
        if (j - i > 3)
            return j - i;
        std::size_t end = j;
        while (end + 3 < s.size() && s[end] == ',' && is_digit(s[end + 1]) && is_digit(s[end + 2])
               && is_digit(s[end + 3]) && (end + 4 == s.size() || !is_digit(s[end + 4])))
            end += 4;
        return end - i;
    }

    // Matching closing brace for the '{' at open, or npos.
    std::size_t match_brace(std::string_view s, std::size_t open)
    {
        int depth = 0;
        for (std::size_t i = open; i < s.size(); ++i)
        {
            if (s[i] == '{')
                ++depth;
            else if (s[i] == '}' && --depth == 0)
                return i;
        }
        return std::string_view::npos;
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

    struct NumberSpan
    {
        std::size_t begin;
        std::size_t end;
    };

    // Signed decimal or fraction literals: -12, 1,234.5, 3/4, .5
    std::vector<NumberSpan> number_spans(std::string_view s)
    {
        std::vector<NumberSpan> spans;
        std::size_t i = 0;
        while (i < s.size())
        {
            bool starts = is_digit(s[i]) || (s[i] == '.' && i + 1 < s.size() && is_digit(s[i + 1]));
            if (!starts || (i > 0 && (is_digit(s[i - 1]) || is_alpha(s[i - 1]))))
            {
                ++i;
                continue;
            }
            std::size_t begin = i;
            if (begin > 0 && s[begin - 1] == '-' && (begin == 1 || !std::isalnum(static_cast<unsigned char>(s[begin - 2]))))
                --begin;
            std::size_t j = i;
            auto digits = [&] {
                while (j < s.size() && (is_digit(s[j]) || (s[j] == ',' && j + 1 < s.size() && is_digit(s[j + 1]))))
                    ++j;
            };
            digits();
            if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1]))
            {
                ++j;
                digits();
            }
            if (j + 1 < s.size() && s[j] == '/' && is_digit(s[j + 1]))
            {
                ++j;
                digits();
                if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1]))
                {
                    ++j;
                    digits();
                }
            }
            spans.push_back({ begin, j });
            i = j;
        }
        return spans;
    }

    std::optional<expr::Rational> parse_loose(std::string_view text)
    {
        std::string cleaned;
        for (char c: text)
            if (c != ',')
                cleaned.push_back(c);
        return expr::parse_number(cleaned);
    }

} // namespace

std::vector<expr::BigInt> integers(std::string_view text)
{
    std::vector<expr::BigInt> out;
    std::size_t i = 0;
    while (i < text.size())
    {
        if (!is_digit(text[i]))
        {
            ++i;
            continue;
        }
        std::size_t len = grouped_digit_run(text, i);
        std::string digits;
        for (std::size_t k = i; k < i + len; ++k)
            if (text[k] != ',')
                digits.push_back(text[k]);
        out.emplace_back(digits);
        i += len;
    }
    return out;
}

std::optional<expr::BigInt> last_integer(std::string_view text)
{
    auto all = integers(text);
    if (all.empty())
        return std::nullopt;
    return all.back();
}

std::optional<char> last_option_letter(std::string_view text)
{
    for (std::size_t i = text.size(); i >= 3; --i)
    {
        std::size_t k = i - 3;
        if (text[k] == '(' && text[k + 2] == ')' && text[k + 1] >= 'A' && text[k + 1] <= 'Z')
            return text[k + 1];
    }
    return std::nullopt;
}

std::optional<std::string> last_word_of(std::string_view text, const std::vector<std::string>& words)
{
    std::optional<std::string> found;
    std::size_t i = 0;
    while (i < text.size())
    {
        if (!is_alpha(text[i]))
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_alpha(text[j]))
            ++j;
        auto word = lower(text.substr(i, j - i));
        if (std::find(words.begin(), words.end(), word) != words.end())
            found = word;
        i = j;
    }
    return found;
}

std::optional<std::string> last_boxed(std::string_view text)
{
    auto pos = text.rfind("\\boxed");
    while (pos != std::string_view::npos)
    {
        auto open = pos + 6;
        while (open < text.size() && text[open] == ' ')
            ++open;
        if (open < text.size() && text[open] == '{')
        {
            auto close = match_brace(text, open);
            if (close != std::string_view::npos)
                return std::string(text.substr(open + 1, close - open - 1));
        }
        if (pos == 0)
            break;
        pos = text.rfind("\\boxed", pos - 1);
    }
    return std::nullopt;
}

std::string canonical_numeric_text(std::string_view text)
{
    std::string s(text);
    if (auto boxed = last_boxed(s))
        s = *boxed;

    for (std::string_view frac: { "\\dfrac", "\\tfrac", "\\frac" })
    {
        std::size_t pos;
        while ((pos = s.find(frac)) != std::string::npos)
        {
            auto open1 = pos + frac.size();
            if (open1 >= s.size() || s[open1] != '{')
            {
                s.erase(pos, frac.size());
                continue;
            }
            auto close1 = match_brace(s, open1);
            if (close1 == std::string::npos || close1 + 1 >= s.size() || s[close1 + 1] != '{')
            {
                s.erase(pos, frac.size());
                continue;
            }
            auto close2 = match_brace(s, close1 + 1);
            if (close2 == std::string::npos)
            {
                s.erase(pos, frac.size());
                continue;
            }
            auto num = s.substr(open1 + 1, close1 - open1 - 1);
            auto den = s.substr(close1 + 2, close2 - close1 - 2);
            s.replace(pos, close2 - pos + 1, num + "/" + den);
        }
    }
    for (std::string_view noise: { "\\left", "\\right", "\\!", "\\,", "\\;", "\\%", "\\$", "$", "%", "{", "}" })
        replace_all(s, noise, "");
    replace_all(s, "\\text", "");
    replace_all(s, "\\mbox", "");

    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        char c = s[i];
        if (c == ',' && i > 0 && is_digit(s[i - 1]) && i + 1 < s.size() && is_digit(s[i + 1]))
            continue;
        out.push_back(c);
    }
    auto first = out.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    out = out.substr(first);
    // Trailing unit words: keep the leading numeric token when one is present.
    if (!out.empty() && (is_digit(out[0]) || out[0] == '-' || out[0] == '.'))
    {
        auto spans = number_spans(out);
        if (!spans.empty() && spans.front().begin == 0)
        {
            auto rest = std::string_view(out).substr(spans.front().end);
            bool only_words = true;
            for (std::size_t k = 0; k < rest.size(); ++k)
            {
                char c = rest[k];
                if (!(is_alpha(c) || c == ' ' || c == '.' || c == '^' || (is_digit(c) && k > 0 && rest[k - 1] == '^')))
                    only_words = false;
            }
            if (only_words)
                out = out.substr(0, spans.front().end);
        }
    }
    auto last = out.find_last_not_of(" \t\r\n.");
    return last == std::string::npos ? "" : out.substr(0, last + 1);
}

std::optional<expr::Rational> last_number(std::string_view text)
{
    if (auto boxed = last_boxed(text))
    {
        auto canon = canonical_numeric_text(*boxed);
        if (auto value = parse_loose(canon))
            return value;
        auto spans = number_spans(canon);
        if (!spans.empty())
            return parse_loose(std::string_view(canon).substr(spans.back().begin, spans.back().end - spans.back().begin));
    }
    auto spans = number_spans(text);
    for (auto it = spans.rbegin(); it != spans.rend(); ++it)
        if (auto value = parse_loose(text.substr(it->begin, it->end - it->begin)))
            return value;
    return std::nullopt;
}

std::vector<std::string_view> bracket_spans(std::string_view text)
{
    std::vector<std::string_view> spans;
    int depth = 0;
    std::size_t open = 0;
    for (std::size_t i = 0; i < text.size(); ++i)
    {
        if (text[i] == '[')
        {
            if (depth++ == 0)
                open = i;
        }
        else if (text[i] == ']' && depth > 0)
        {
            if (--depth == 0)
                spans.push_back(text.substr(open, i - open + 1));
        }
    }
    return spans;
}

} // namespace steerbench::tasks::extract
