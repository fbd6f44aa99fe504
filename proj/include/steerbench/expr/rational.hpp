// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace steerbench::expr
{

using BigInt = boost::multiprecision::cpp_int;

class DivisionByZero: public std::runtime_error
{
public:
    explicit DivisionByZero(std::string subtree, std::size_t offset = 0);

    /// Printed form of the subtree whose divisor evaluated to zero.
    const std::string& subtree() const noexcept { return _subtree; }
    std::size_t offset() const noexcept { return _offset; }

private:
    std::string _subtree;
    std::size_t _offset;
};

/// Exact rational number, always kept in lowest terms with a positive denominator.
class Rational
{
public:
    Rational(): _num(0), _den(1) {}
    Rational(long long value): _num(value), _den(1) {} // NOLINT(google-explicit-constructor)
    explicit Rational(BigInt value): _num(std::move(value)), _den(1) {}
    Rational(BigInt numerator, BigInt denominator);

    const BigInt& numerator() const noexcept { return _num; }
    const BigInt& denominator() const noexcept { return _den; }

    bool is_integer() const { return _den == 1; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    /// Throws DivisionByZero when b is zero.
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "n" for integers, "n/d" otherwise.
    std::string to_string() const;

private:
    void normalize();

    BigInt _num;
    BigInt _den;
};

/// Parses a standalone number as written in an answer: optional sign, digits with
/// optional thousands commas, optional decimal part, or a fraction "a/b".
std::optional<Rational> parse_number(std::string_view text);

} // namespace steerbench::expr
