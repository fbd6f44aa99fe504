// SPDX-License-Identifier: Apache-2.0
#include <steerbench/expr/ast.hpp>

#include <algorithm>

namespace steerbench::expr
{

char op_symbol(BinaryOp op) noexcept
{
    switch (op)
    {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
    }
    return '?';
}

Ast Ast::leaf(BigInt value, std::size_t offset, bool synthetic)
{
    return Ast { .node = Leaf { std::move(value), synthetic }, .offset = offset };
}

Ast Ast::binary(BinaryOp op, Ast lhs, Ast rhs, std::size_t offset)
{
    return Ast {
        .node = Binary { op, std::make_unique<Ast>(std::move(lhs)), std::make_unique<Ast>(std::move(rhs)) },
        .offset = offset,
    };
}

Ast Ast::clone() const
{
    if (is_leaf())
        return Ast { .node = as_leaf(), .offset = offset };
    const auto& b = as_binary();
    return binary(b.op, b.lhs->clone(), b.rhs->clone(), offset);
}

bool structurally_equal(const Ast& a, const Ast& b)
{
    if (a.is_leaf() != b.is_leaf())
        return false;
    if (a.is_leaf())
        return a.as_leaf().value == b.as_leaf().value && a.as_leaf().synthetic == b.as_leaf().synthetic;
    const auto& x = a.as_binary();
    const auto& y = b.as_binary();
    return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
}

SyntaxError::SyntaxError(const std::string& message, std::size_t offset):
    std::runtime_error(message + " at offset " + std::to_string(offset)), _offset(offset)
{
}

namespace
{

    enum class TokenKind
    {
        Number,
        Plus,
        Minus,
        Star,
        Slash,
        LParen,
        RParen,
        End,
    };

    struct Token
    {
        TokenKind kind;
        std::size_t offset;
        std::string_view text;
    };

    class Lexer
    {
    public:
        explicit Lexer(std::string_view text): _text(text) {}

        Token next()
        {
            skip_space();
            if (_pos >= _text.size())
                return { TokenKind::End, _pos, {} };

            std::size_t start = _pos;
            unsigned char c = static_cast<unsigned char>(_text[_pos]);
            if (c >= '0' && c <= '9')
            {
                while (_pos < _text.size() && _text[_pos] >= '0' && _text[_pos] <= '9')
                    ++_pos;
                return { TokenKind::Number, start, _text.substr(start, _pos - start) };
            }
            switch (c)
            {
                case '+': ++_pos; return { TokenKind::Plus, start, {} };
                case '-': ++_pos; return { TokenKind::Minus, start, {} };
                case '*': ++_pos; return { TokenKind::Star, start, {} };
                case '/': ++_pos; return { TokenKind::Slash, start, {} };
                case '(': ++_pos; return { TokenKind::LParen, start, {} };
                case ')': ++_pos; return { TokenKind::RParen, start, {} };
                default: break;
            }
            // UTF-8 multiplication sign, division sign and minus sign.
            if (starts_with("\xC3\x97"))
                return advance(2, TokenKind::Star, start);
            if (starts_with("\xC3\xB7"))
                return advance(2, TokenKind::Slash, start);
            if (starts_with("\xE2\x88\x92"))
                return advance(3, TokenKind::Minus, start);
            throw SyntaxError("unexpected character", start);
        }

    private:
        void skip_space()
        {
            while (_pos < _text.size())
            {
                char c = _text[_pos];
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                    ++_pos;
                else
                    break;
            }
        }

        bool starts_with(std::string_view s) const { return _text.substr(_pos).starts_with(s); }

        Token advance(std::size_t n, TokenKind kind, std::size_t start)
        {
            _pos += n;
            return { kind, start, {} };
        }

        std::string_view _text;
        std::size_t _pos = 0;
    };

    class Parser
    {
    public:
        explicit Parser(std::string_view text): _lexer(text) { _current = _lexer.next(); }

        Ast parse_all()
        {
            Ast result = parse_expression();
            if (_current.kind != TokenKind::End)
                throw SyntaxError("unexpected token", _current.offset);
            return result;
        }

    private:
        void advance() { _current = _lexer.next(); }

        Ast parse_expression()
        {
            Ast lhs = [&] {
                if (_current.kind == TokenKind::Minus)
                {
                    std::size_t at = _current.offset;
                    advance();
                    return Ast::binary(BinaryOp::Sub, Ast::leaf(0, at, true), parse_term(), at);
                }
                return parse_term();
            }();

            while (_current.kind == TokenKind::Plus || _current.kind == TokenKind::Minus)
            {
                auto op = _current.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
                std::size_t at = _current.offset;
                advance();
                lhs = Ast::binary(op, std::move(lhs), parse_term(), at);
            }
            return lhs;
        }

        Ast parse_term()
        {
            Ast lhs = parse_factor();
            while (_current.kind == TokenKind::Star || _current.kind == TokenKind::Slash)
            {
                auto op = _current.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
                std::size_t at = _current.offset;
                advance();
                lhs = Ast::binary(op, std::move(lhs), parse_factor(), at);
            }
            return lhs;
        }

        Ast parse_factor()
        {
            if (_current.kind == TokenKind::Number)
            {
                Ast leaf = Ast::leaf(BigInt(std::string(_current.text)), _current.offset);
                advance();
                return leaf;
            }
            if (_current.kind == TokenKind::LParen)
            {
                advance();
                Ast inner = parse_expression();
                if (_current.kind != TokenKind::RParen)
                    throw SyntaxError("expected ')'", _current.offset);
                advance();
                return inner;
            }
            if (_current.kind == TokenKind::End)
                throw SyntaxError("unexpected end of input", _current.offset);
            throw SyntaxError("expected a number or '('", _current.offset);
        }

        Lexer _lexer;
        Token _current {};
    };

    bool is_unary_minus(const Ast& ast)
    {
        if (ast.is_leaf())
            return false;
        const auto& b = ast.as_binary();
        return b.op == BinaryOp::Sub && b.lhs->is_leaf() && b.lhs->as_leaf().synthetic;
    }

    int precedence(BinaryOp op)
    {
        return op == BinaryOp::Add || op == BinaryOp::Sub ? 1 : 2;
    }

    // Unary minus is only legal at expression start, so anywhere else it is wrapped and
    // behaves as an atom.
    int render_precedence(const Ast& ast)
    {
        if (ast.is_leaf() || is_unary_minus(ast))
            return 3;
        return precedence(ast.as_binary().op);
    }

    void render(const Ast& ast, bool at_start, std::string& out)
    {
        if (ast.is_leaf())
        {
            out += ast.as_leaf().value.str();
            return;
        }
        const auto& b = ast.as_binary();
        if (is_unary_minus(ast))
        {
            if (!at_start)
                out += '(';
            out += '-';
            bool wrap = !b.rhs->is_leaf() && !is_unary_minus(*b.rhs) && precedence(b.rhs->as_binary().op) == 1;
            wrap = wrap || is_unary_minus(*b.rhs);
            if (wrap)
                out += '(';
            render(*b.rhs, wrap, out);
            if (wrap)
                out += ')';
            if (!at_start)
                out += ')';
            return;
        }

        int p = precedence(b.op);
        bool wrap_lhs = render_precedence(*b.lhs) < p;
        if (wrap_lhs)
            out += '(';
        // "-a*b" would reparse as -(a*b), so a leading unary minus stays bare only under + and -.
        render(*b.lhs, (at_start && p == 1) || wrap_lhs, out);
        if (wrap_lhs)
            out += ')';

        out += op_symbol(b.op);

        bool wrap_rhs = render_precedence(*b.rhs) <= p;
        if (wrap_rhs)
            out += '(';
        render(*b.rhs, wrap_rhs, out);
        if (wrap_rhs)
            out += ')';
    }

    void collect_leaves(const Ast& ast, std::vector<BigInt>& out)
    {
        if (ast.is_leaf())
        {
            if (!ast.as_leaf().synthetic)
                out.push_back(ast.as_leaf().value);
            return;
        }
        collect_leaves(*ast.as_binary().lhs, out);
        collect_leaves(*ast.as_binary().rhs, out);
    }

} // namespace

Ast parse(std::string_view text)
{
    return Parser(text).parse_all();
}

Rational eval_exact(const Ast& ast)
{
    if (ast.is_leaf())
        return Rational(ast.as_leaf().value);

    const auto& b = ast.as_binary();
    Rational lhs = eval_exact(*b.lhs);
    Rational rhs = eval_exact(*b.rhs);
    switch (b.op)
    {
        case BinaryOp::Add: return lhs + rhs;
        case BinaryOp::Sub: return lhs - rhs;
        case BinaryOp::Mul: return lhs * rhs;
        case BinaryOp::Div:
            if (rhs == Rational(0))
                throw DivisionByZero(to_string(ast), ast.offset);
            return lhs / rhs;
    }
    return {};
}

std::vector<BigInt> leaf_multiset(const Ast& ast)
{
    std::vector<BigInt> leaves;
    collect_leaves(ast, leaves);
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

std::string to_string(const Ast& ast)
{
    std::string out;
    render(ast, true, out);
    return out;
}

} // namespace steerbench::expr
