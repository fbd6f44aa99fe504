// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference implementations kept deliberately separate from the library code they check.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle
{

using Fraction = boost::multiprecision::cpp_rational;

// Recursive-descent evaluator over ASCII + - * / and parentheses; no unary minus.
class FractionEvaluator
{
public:
    explicit FractionEvaluator(std::string text): _s(std::move(text)) {}

    std::optional<Fraction> run()
    {
        try
        {
            auto v = sum();
            skip();
            if (_i != _s.size())
                return std::nullopt;
            return v;
        }
        catch (const std::domain_error&)
        {
            return std::nullopt;
        }
    }

    std::vector<long> leaves;

private:
    void skip()
    {
        while (_i < _s.size() && _s[_i] == ' ')
            ++_i;
    }

    Fraction sum()
    {
        Fraction v = product();
        while (true)
        {
            skip();
            if (_i < _s.size() && (_s[_i] == '+' || _s[_i] == '-'))
            {
                char op = _s[_i++];
                Fraction r = product();
                v = op == '+' ? Fraction(v + r) : Fraction(v - r);
            }
            else
                return v;
        }
    }

    Fraction product()
    {
        Fraction v = atom();
        while (true)
        {
            skip();
            if (_i < _s.size() && (_s[_i] == '*' || _s[_i] == '/'))
            {
                char op = _s[_i++];
                Fraction r = atom();
                if (op == '/' && r == 0)
                    throw std::domain_error("division by zero");
                v = op == '*' ? Fraction(v * r) : Fraction(v / r);
            }
            else
                return v;
        }
    }

    Fraction atom()
    {
        skip();
        if (_i < _s.size() && _s[_i] == '(')
        {
            ++_i;
            Fraction v = sum();
            skip();
            if (_i >= _s.size() || _s[_i] != ')')
                throw std::domain_error("unbalanced");
            ++_i;
            return v;
        }
        std::size_t start = _i;
        while (_i < _s.size() && _s[_i] >= '0' && _s[_i] <= '9')
            ++_i;
        if (start == _i)
            throw std::domain_error("expected number");
        long value = std::stol(_s.substr(start, _i - start));
        leaves.push_back(value);
        return Fraction(value);
    }

    std::string _s;
    std::size_t _i = 0;
};

// STRIPS-style Blocksworld over explicit predicates.
class Strips
{
public:
    // stacks listed bottom to top
    explicit Strips(const std::vector<std::vector<std::string>>& stacks)
    {
        _facts.insert("handempty");
        for (const auto& s: stacks)
        {
            _facts.insert("ontable " + s.front());
            for (std::size_t i = 1; i < s.size(); ++i)
                _facts.insert("on " + s[i] + " " + s[i - 1]);
            _facts.insert("clear " + s.back());
            for (const auto& b: s)
                _blocks.insert(b);
        }
    }

    // Actions in the canonical text form: "pick up X", "put down X",
    // "unstack X from on top of Y", "stack X on top of Y".
    bool apply(const std::string& line)
    {
        std::istringstream in(line);
        std::vector<std::string> w;
        for (std::string t; in >> t;)
            w.push_back(t);
        if (w.size() == 3 && w[0] == "pick" && w[1] == "up")
            return step({ "clear " + w[2], "ontable " + w[2], "handempty" }, { "holding " + w[2] },
                        { "clear " + w[2], "ontable " + w[2], "handempty" }, { w[2] });
        if (w.size() == 3 && w[0] == "put" && w[1] == "down")
            return step({ "holding " + w[2] }, { "ontable " + w[2], "clear " + w[2], "handempty" },
                        { "holding " + w[2] }, { w[2] });
        if (w.size() == 7 && w[0] == "unstack")
            return step({ "on " + w[1] + " " + w[6], "clear " + w[1], "handempty" },
                        { "holding " + w[1], "clear " + w[6] }, { "on " + w[1] + " " + w[6], "clear " + w[1], "handempty" },
                        { w[1], w[6] });
        if (w.size() == 6 && w[0] == "stack" && w[1] != w[5])
            return step({ "holding " + w[1], "clear " + w[5] }, { "on " + w[1] + " " + w[5], "clear " + w[1], "handempty" },
                        { "holding " + w[1], "clear " + w[5] }, { w[1], w[5] });
        return false;
    }

    bool satisfies(const std::vector<std::vector<std::string>>& goal) const
    {
        return Strips(goal)._facts == _facts;
    }

private:
    bool step(const std::vector<std::string>& pre, const std::vector<std::string>& add,
              const std::vector<std::string>& del, const std::vector<std::string>& objects)
    {
        for (const auto& o: objects)
            if (!_blocks.contains(o))
                return false;
        for (const auto& p: pre)
            if (!_facts.contains(p))
                return false;
        for (const auto& d: del)
            _facts.erase(d);
        for (const auto& a: add)
            _facts.insert(a);
        return true;
    }

    std::set<std::string> _facts;
    std::set<std::string> _blocks;
};

// Positions (1-indexed) of letter in word.
inline std::vector<int> letter_positions(const std::string& word, char letter)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < word.size(); ++i)
        if (word[i] == letter)
            out.push_back(static_cast<int>(i) + 1);
    return out;
}

// Plain schoolbook multiplication on decimal strings.
inline std::string multiply_decimal(const std::string& a, const std::string& b)
{
    std::vector<int> acc(a.size() + b.size(), 0);
    for (std::size_t i = a.size(); i-- > 0;)
        for (std::size_t j = b.size(); j-- > 0;)
            acc[i + j + 1] += (a[i] - '0') * (b[j] - '0');
    for (std::size_t k = acc.size(); k-- > 1;)
    {
        acc[k - 1] += acc[k] / 10;
        acc[k] %= 10;
    }
    std::string out;
    for (int d: acc)
        if (!(out.empty() && d == 0))
            out.push_back(static_cast<char>('0' + d));
    return out.empty() ? "0" : out;
}

} // namespace oracle
