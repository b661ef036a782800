#pragma once

#include "coh/arith.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace coh {

/// Recursive-descent parser for arithmetic expressions with +, -, *, /, ^,
/// parentheses, integer literals, identifiers and implicit multiplication
/// ("2w" = 2*w). Evaluation is delegated to an algebra object providing
/// constant, variable, add, sub, mul, div, neg and pow.
template <class Alg>
class ExprParser {
public:
    using Elem = typename Alg::Elem;

    ExprParser(const Alg& alg, const std::string& text) : alg_(alg), s_(text) {}

    Elem parse() {
        Elem v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    const Alg& alg_;
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("expression '" + s_ + "': " + why + " at offset " + std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool starts_primary() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
               c == '(';
    }

    Elem expr() {
        Elem v = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++i_;
                v = alg_.add(v, term());
            } else if (c == '-') {
                ++i_;
                v = alg_.sub(v, term());
            } else {
                return v;
            }
        }
    }

    Elem term() {
        Elem v = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++i_;
                v = alg_.mul(v, unary());
            } else if (c == '/') {
                ++i_;
                v = alg_.div(v, unary());
            } else if (starts_primary()) {
                v = alg_.mul(v, power());
            } else {
                return v;
            }
        }
    }

    Elem unary() {
        char c = peek();
        if (c == '-') {
            ++i_;
            return alg_.neg(unary());
        }
        if (c == '+') {
            ++i_;
            return unary();
        }
        return power();
    }

    long exponent() {
        bool braced = false;
        if (peek() == '{') {
            braced = true;
            ++i_;
        }
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++i_;
        }
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("exponent expected");
        long e = std::stol(s_.substr(start, i_ - start));
        if (braced) {
            if (peek() != '}') fail("'}' expected");
            ++i_;
        }
        return negative ? -e : e;
    }

    Elem power() {
        Elem v = primary();
        if (peek() == '^') {
            ++i_;
            v = alg_.pow(v, exponent());
        }
        return v;
    }

    Elem primary() {
        char c = peek();
        if (c == '(') {
            ++i_;
            Elem v = expr();
            if (peek() != ')') fail("')' expected");
            ++i_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return alg_.constant(Rational(BigInt(s_.substr(start, i_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return alg_.variable(s_.substr(start, i_ - start));
        }
        fail("operand expected");
    }
};

}  // namespace coh
