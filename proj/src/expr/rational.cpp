// SPDX-License-Identifier: Apache-2.0
#include <steerbench/expr/rational.hpp>

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>

namespace steerbench::expr
{

DivisionByZero::DivisionByZero(std::string subtree, std::size_t offset):
    std::runtime_error("division by zero in '" + subtree + "'"), _subtree(std::move(subtree)), _offset(offset)
{
}

Rational::Rational(BigInt numerator, BigInt denominator): _num(std::move(numerator)), _den(std::move(denominator))
{
    if (_den == 0)
        throw DivisionByZero(_num.str() + "/0");
    normalize();
}

void Rational::normalize()
{
    if (_den < 0)
    {
        _num = -_num;
        _den = -_den;
    }
    if (_num == 0)
    {
        _den = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(_num, _den);
    if (g != 1)
    {
        _num /= g;
        _den /= g;
    }
}

Rational operator+(const Rational& a, const Rational& b)
{
    if (a._den == b._den)
        return Rational(a._num + b._num, a._den);
    return Rational(a._num * b._den + b._num * a._den, a._den * b._den);
}

Rational operator-(const Rational& a, const Rational& b)
{
    if (a._den == b._den)
        return Rational(a._num - b._num, a._den);
    return Rational(a._num * b._den - b._num * a._den, a._den * b._den);
}

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational(a._num * b._num, a._den * b._den);
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b._num == 0)
        throw DivisionByZero(a.to_string() + "/0");
    return Rational(a._num * b._den, a._den * b._num);
}

Rational Rational::operator-() const
{
    Rational r = *this;
    r._num = -r._num;
    return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    BigInt lhs = a._num * b._den;
    BigInt rhs = b._num * a._den;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_string() const
{
    if (_den == 1)
        return _num.str();
    return _num.str() + "/" + _den.str();
}

namespace
{

    // Digits with optional thousands separators ("12,345"). Returns the digits only.
    std::optional<std::string> read_grouped_digits(std::string_view s)
    {
        if (s.empty())
            return std::nullopt;
        std::string digits;
        std::size_t group = 0;
        bool saw_comma = false;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            char c = s[i];
            if (std::isdigit(static_cast<unsigned char>(c)))
            {
                digits.push_back(c);
                ++group;
            }
            else if (c == ',')
            {
                if (group == 0 || (saw_comma && group != 3) || (!saw_comma && group > 3))
                    return std::nullopt;
                saw_comma = true;
                group = 0;
            }
            else
                return std::nullopt;
        }
        if (digits.empty() || (saw_comma && group != 3))
            return std::nullopt;
        return digits;
    }

    std::optional<Rational> parse_unsigned_decimal(std::string_view s)
    {
        auto dot = s.find('.');
        auto int_part = s.substr(0, dot);
        std::string digits;
        if (!int_part.empty())
        {
            auto grouped = read_grouped_digits(int_part);
            if (!grouped)
                return std::nullopt;
            digits = *grouped;
        }
        if (dot == std::string_view::npos)
            return digits.empty() ? std::nullopt : std::optional<Rational>(Rational(BigInt(digits)));

        auto frac = s.substr(dot + 1);
        for (char c: frac)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return std::nullopt;
        if (digits.empty() && frac.empty())
            return std::nullopt;
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        BigInt whole = digits.empty() ? BigInt(0) : BigInt(digits);
        BigInt fraction = frac.empty() ? BigInt(0) : BigInt(std::string(frac));
        return Rational(whole * scale + fraction, scale);
    }

} // namespace

std::optional<Rational> parse_number(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        return std::nullopt;

    bool negative = false;
    if (text.front() == '-' || text.front() == '+')
    {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    std::optional<Rational> value;
    if (auto slash = text.find('/'); slash != std::string_view::npos)
    {
        auto num = parse_unsigned_decimal(text.substr(0, slash));
        auto den = parse_unsigned_decimal(text.substr(slash + 1));
        if (!num || !den || *den == Rational(0))
            return std::nullopt;
        value = *num / *den;
    }
    else
        value = parse_unsigned_decimal(text);

    if (value && negative)
        value = -*value;
    return value;
}

} // namespace steerbench::expr
