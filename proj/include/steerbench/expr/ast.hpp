// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/expr/rational.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace steerbench::expr
{

enum class BinaryOp
{
    Add,
    Sub,
    Mul,
    Div,
};

char op_symbol(BinaryOp op) noexcept;

/// Arithmetic expression tree. Parentheses are structural only and leave no node.
struct Ast
{
    struct Leaf
    {
        BigInt value;
        // The implicit 0 of a desugared unary minus.
        bool synthetic = false;
    };

    struct Binary
    {
        BinaryOp op;
        std::unique_ptr<Ast> lhs;
        std::unique_ptr<Ast> rhs;
    };

    std::variant<Leaf, Binary> node;
    std::size_t offset = 0;

    static Ast leaf(BigInt value, std::size_t offset = 0, bool synthetic = false);
    static Ast binary(BinaryOp op, Ast lhs, Ast rhs, std::size_t offset = 0);

    bool is_leaf() const noexcept { return std::holds_alternative<Leaf>(node); }
    const Leaf& as_leaf() const { return std::get<Leaf>(node); }
    const Binary& as_binary() const { return std::get<Binary>(node); }

    Ast clone() const;
};

/// Structural equality: same shape, operators, literals and synthetic flags. Offsets are ignored.
bool structurally_equal(const Ast& a, const Ast& b);

class SyntaxError: public std::runtime_error
{
public:
    SyntaxError(const std::string& message, std::size_t offset);
    std::size_t offset() const noexcept { return _offset; }

private:
    std::size_t _offset;
};

/// Parses +, -, *, / (also the glyphs ×, ÷ and −) with the usual precedence and left
/// associativity. A leading minus at expression or parenthesis start becomes 0 - x.
/// Throws SyntaxError with the byte offset of the first offending character.
Ast parse(std::string_view text);

/// Exact value. Throws DivisionByZero naming the offending subtree.
Rational eval_exact(const Ast& ast);

/// Literals in the tree, sorted ascending, duplicates preserved; synthetic zeros excluded.
std::vector<BigInt> leaf_multiset(const Ast& ast);

/// Minimal-parenthesis rendering that reparses to a structurally identical tree.
std::string to_string(const Ast& ast);

} // namespace steerbench::expr
