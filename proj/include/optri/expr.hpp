// Recursive-descent parser and evaluator for arithmetic expressions in x and y.
// Supported: + - * / ^ (right-associative, binds tighter than unary minus),
// parentheses, numeric literals, and sin, cos, cosh, sinh, exp, log, sqrt.
#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "optri/errors.hpp"

namespace optri::expr {

enum class Op { Const, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Cosh, Sinh, Exp, Log, Sqrt };

struct Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<Node> lhs, rhs;
};

using NodePtr = std::shared_ptr<Node>;

inline double eval(const Node& n, double x, double y) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::VarX: return x;
        case Op::VarY: return y;
        case Op::Neg: return -eval(*n.lhs, x, y);
        case Op::Add: return eval(*n.lhs, x, y) + eval(*n.rhs, x, y);
        case Op::Sub: return eval(*n.lhs, x, y) - eval(*n.rhs, x, y);
        case Op::Mul: return eval(*n.lhs, x, y) * eval(*n.rhs, x, y);
        case Op::Div: return eval(*n.lhs, x, y) / eval(*n.rhs, x, y);
        case Op::Pow: return std::pow(eval(*n.lhs, x, y), eval(*n.rhs, x, y));
        case Op::Sin: return std::sin(eval(*n.lhs, x, y));
        case Op::Cos: return std::cos(eval(*n.lhs, x, y));
        case Op::Cosh: return std::cosh(eval(*n.lhs, x, y));
        case Op::Sinh: return std::sinh(eval(*n.lhs, x, y));
        case Op::Exp: return std::exp(eval(*n.lhs, x, y));
        case Op::Log: return std::log(eval(*n.lhs, x, y));
        case Op::Sqrt: return std::sqrt(eval(*n.lhs, x, y));
    }
    return 0.0;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr root = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return root;
    }

private:
    static NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double v = 0.0) {
        return std::make_shared<Node>(Node{op, v, std::move(lhs), std::move(rhs)});
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            if (eat('+'))
                lhs = make(Op::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make(Op::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        while (true) {
            if (eat('*'))
                lhs = make(Op::Mul, lhs, parse_factor());
            else if (eat('/'))
                lhs = make(Op::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        if (eat('-')) return make(Op::Neg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (eat('^')) return make(Op::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        if (eat('(')) {
            NodePtr inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // the 'e' was not an exponent
            }
        }
        try {
            return make(Op::Const, nullptr, nullptr, std::stod(std::string(src_.substr(start, pos_ - start))));
        } catch (const std::exception&) {
            throw ParseError("malformed number", start);
        }
    }

    NodePtr parse_name() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Op::VarX);
        if (name == "y") return make(Op::VarY);
        Op op;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "cosh") op = Op::Cosh;
        else if (name == "sinh") op = Op::Sinh;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "sqrt") op = Op::Sqrt;
        else throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
        NodePtr arg = parse_expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return make(op, arg);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// Parsed expression as a callable; evaluation failures (NaN or infinity at a
// requested point) raise EvalError.
struct Expression {
    std::string source;
    NodePtr root;

    double operator()(double x, double y) const {
        double v = eval(*root, x, y);
        if (!std::isfinite(v))
            throw EvalError("expression '" + source + "' is not finite at (" + std::to_string(x) +
                            ", " + std::to_string(y) + ")");
        return v;
    }
};

inline Expression parse(std::string_view src) {
    Parser p(src);
    return Expression{std::string(src), p.parse()};
}

}  // namespace optri::expr
