// SPDX-License-Identifier: Apache-2.0
#include <steerbench/tasks/game24.hpp>

#include <steerbench/expr/rational.hpp>

#include <algorithm>
#include <set>

namespace steerbench::tasks
{

namespace
{

    using expr::Rational;

    struct Term
    {
        Rational value;
        std::string text;
        // 3 = atom, 2 = product/quotient, 1 = sum/difference
        int precedence = 3;
    };

    std::string combine_text(const Term& a, char op, const Term& b)
    {
        int p = op == '+' || op == '-' ? 1 : 2;
        std::string out;
        out += a.precedence < p ? "(" + a.text + ")" : a.text;
        out += op;
        out += b.precedence <= p ? "(" + b.text + ")" : b.text;
        return out;
    }

    class Solver
    {
    public:
        std::optional<std::string> solve(std::vector<Term> terms)
        {
            if (terms.size() == 1)
                return terms[0].value == Rational(24) ? std::optional(terms[0].text) : std::nullopt;

            auto key = state_key(terms);
            if (_dead.contains(key))
                return std::nullopt;

            for (std::size_t i = 0; i < terms.size(); ++i)
            {
                for (std::size_t j = i + 1; j < terms.size(); ++j)
                {
                    std::vector<Term> rest;
                    rest.reserve(terms.size() - 1);
                    for (std::size_t k = 0; k < terms.size(); ++k)
                        if (k != i && k != j)
                            rest.push_back(terms[k]);

                    for (auto& candidate: combinations(terms[i], terms[j]))
                    {
                        rest.push_back(std::move(candidate));
                        if (auto found = solve(rest))
                            return found;
                        rest.pop_back();
                    }
                }
            }
            _dead.insert(std::move(key));
            return std::nullopt;
        }

    private:
        static std::vector<Term> combinations(const Term& a, const Term& b)
        {
            std::vector<Term> out;
            out.push_back({ a.value + b.value, combine_text(a, '+', b), 1 });
            out.push_back({ a.value * b.value, combine_text(a, '*', b), 2 });
            out.push_back({ a.value - b.value, combine_text(a, '-', b), 1 });
            out.push_back({ b.value - a.value, combine_text(b, '-', a), 1 });
            if (b.value != Rational(0))
                out.push_back({ a.value / b.value, combine_text(a, '/', b), 2 });
            if (a.value != Rational(0))
                out.push_back({ b.value / a.value, combine_text(b, '/', a), 2 });
            return out;
        }

        static std::string state_key(const std::vector<Term>& terms)
        {
            std::vector<Rational> values;
            for (const auto& t: terms)
                values.push_back(t.value);
            std::sort(values.begin(), values.end());
            std::string key;
            for (const auto& v: values)
            {
                key += v.to_string();
                key += ' ';
            }
            return key;
        }

        std::set<std::string> _dead;
    };

} // namespace

std::optional<std::string> solve_game24_bruteforce(std::span<const int> values)
{
    if (values.size() < 2 || values.size() > 8)
        return std::nullopt;
    std::vector<Term> terms;
    for (int v: values)
        terms.push_back({ Rational(v), std::to_string(v), 3 });
    return Solver().solve(std::move(terms));
}

} // namespace steerbench::tasks
