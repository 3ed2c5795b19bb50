#pragma once

// Textual expression language for jet expressions.
//
//   atoms:      f[a,b',0]   exp((2+p)*f)   D[a,b] E[a,b'] D[a] E[a] G[a] g
//               delta(a,b')  I  n  p  s  rationals like 3/2
//   operators:  + - * ^   conj(...)  Re(...)  Z[a'](...)
//
// A trailing prime marks an antiholomorphic index, `0` is the t-slot.
// Repeated index letters denote contraction; free indices appear once.

#include <cctype>
#include <string>
#include <vector>

#include "crjet/cr_ops.hpp"
#include "crjet/expr.hpp"

namespace crjet {

class parse_error : public std::runtime_error {
  public:
    int line, col;
    parse_error(const std::string& msg, int line_, int col_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

namespace detail {

struct Token {
    enum Type { Number, Ident, Punct, End } type;
    std::string text;
    int line, col;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (src[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Token::Number, src.substr(i, j - i), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Token::Ident, src.substr(i, j - i), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::string("+-*/^()[],'=").find(c) != std::string::npos) {
            // '==' as one token
            if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') {
                out.push_back({Token::Punct, "==", tl, tc});
                advance(2);
                continue;
            }
            out.push_back({Token::Punct, std::string(1, c), tl, tc});
            advance(1);
            continue;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({Token::End, "", line, col});
    return out;
}

class ExprParser {
  public:
    ExprParser(std::vector<Token> toks, const BuilderContext& ctx)
        : toks_(std::move(toks)), ctx_(ctx) {}

    Expression parse_full() {
        Expression e = parse_expr();
        expect_end();
        return e;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const BuilderContext& ctx_;

    const Token& cur() const { return toks_[pos_]; }
    bool at_punct(const char* s) const { return cur().type == Token::Punct && cur().text == s; }
    bool at_ident(const char* s) const { return cur().type == Token::Ident && cur().text == s; }
    void next() { ++pos_; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, cur().line, cur().col);
    }
    void expect_punct(const char* s) {
        if (!at_punct(s))
            fail(std::string("expected '") + s + "'");
        next();
    }
    void expect_end() {
        if (cur().type != Token::End)
            fail("trailing input");
    }

    Expression parse_expr() {
        bool neg = false;
        if (at_punct("-")) {
            neg = true;
            next();
        } else if (at_punct("+")) {
            next();
        }
        Expression acc = parse_term();
        if (neg)
            acc = -acc;
        while (at_punct("+") || at_punct("-")) {
            bool minus = at_punct("-");
            next();
            Expression t = parse_term();
            acc = guarded([&] { return minus ? acc - t : acc + t; });
        }
        return acc;
    }

    Expression parse_term() {
        Expression acc = parse_power();
        while (at_punct("*") || at_punct("/")) {
            bool div = at_punct("/");
            next();
            Expression rhs = parse_power();
            if (div) {
                // division only by nonzero rational constants
                Rational r = constant_rational(rhs, "divisor");
                if (r.is_zero())
                    fail("division by zero");
                acc = acc * Expression::constant(Rational(1) / r);
            } else {
                acc = guarded([&] { return acc * rhs; });
            }
        }
        return acc;
    }

    Expression parse_power() {
        Expression base = parse_atom();
        if (at_punct("^")) {
            next();
            if (cur().type != Token::Number || cur().text.size() > 3)
                fail("expected a small integer exponent after '^'");
            long long e = std::stoll(cur().text);
            next();
            Expression acc = Expression::constant(1);
            for (long long k = 0; k < e; ++k)
                acc = guarded([&] { return acc * base; });
            return acc;
        }
        return base;
    }

    template <typename F>
    Expression guarded(F&& fn) {
        int line = cur().line, col = cur().col;
        try {
            return fn();
        } catch (const invariant_error& err) {
            throw parse_error(err.what(), line, col);
        } catch (const signature_error& err) {
            throw parse_error(err.what(), line, col);
        }
    }

    Rational constant_rational(const Expression& e, const char* what) {
        if (e.size() != 1 || !e.monomials()[0].is_scalar_shape() ||
            !e.monomials()[0].exp.is_identity() || !e.monomials()[0].coeff.is_constant() ||
            !e.monomials()[0].coeff.constant_value().is_real())
            fail(std::string("expected a rational ") + what);
        return e.monomials()[0].coeff.constant_value().re;
    }

    struct Idx {
        Kind kind;
        int label;  // 0 for t
    };

    Idx parse_index() {
        if (cur().type == Token::Number && cur().text == "0") {
            next();
            return {Kind::T0, 0};
        }
        if (cur().type != Token::Ident || cur().text.size() != 1 ||
            !std::islower(static_cast<unsigned char>(cur().text[0])))
            fail("expected an index letter or 0");
        int label = cur().text[0] - 'a' + 1;
        next();
        if (at_punct("'")) {
            next();
            return {Kind::AntiHol, label};
        }
        return {Kind::Hol, label};
    }

    Index to_index(const Idx& ix) {
        if (ix.kind == Kind::T0)
            return Index::t0();
        return Index(ix.kind, ix.label);
    }

    Expression parse_atom() {
        if (at_punct("(")) {
            next();
            Expression e = guarded([&] { return parse_expr(); });
            expect_punct(")");
            return e;
        }
        if (cur().type == Token::Number) {
            Rational num = Rational::from_string(cur().text);
            next();
            return Expression::constant(num);
        }
        if (cur().type != Token::Ident)
            fail("expected an atom");
        std::string name = cur().text;
        if (name == "I") {
            next();
            return Expression::i();
        }
        if (name == "n") {
            next();
            return Expression::n();
        }
        if (name == "p") {
            next();
            return Expression::p();
        }
        if (name == "s") {
            next();
            return Expression::s();
        }
        if (name == "g") {
            next();
            return ctx_.g();
        }
        if (name == "f")
            return parse_jet();
        if (name == "D" || name == "E" || name == "G")
            return parse_named(name);
        if (name == "exp")
            return parse_exp_weight();
        if (name == "conj") {
            next();
            expect_punct("(");
            Expression e = guarded([&] { return parse_expr(); });
            expect_punct(")");
            return conj(e);
        }
        if (name == "Re") {
            next();
            expect_punct("(");
            Expression e = guarded([&] { return parse_expr(); });
            expect_punct(")");
            return guarded([&] { return re_part(e); });
        }
        if (name == "Z")
            return parse_z();
        if (name == "delta")
            return parse_delta();
        fail("unknown name '" + name + "'");
    }

    Expression parse_jet() {
        next();  // 'f'
        expect_punct("[");
        Word w;
        for (;;) {
            w.push_back(to_index(parse_index()));
            if (at_punct(",")) {
                next();
                continue;
            }
            break;
        }
        expect_punct("]");
        return guarded([&] { return Expression::jet(w); });
    }

    Expression parse_named(const std::string& name) {
        int line = cur().line, col = cur().col;
        next();
        expect_punct("[");
        std::vector<Idx> idx;
        idx.push_back(parse_index());
        if (at_punct(",")) {
            next();
            idx.push_back(parse_index());
        }
        expect_punct("]");
        for (const Idx& ix : idx)
            if (ix.kind == Kind::T0)
                throw parse_error(name + " does not take a t-slot", line, col);
        auto bad = [&]() -> Expression {
            throw parse_error("bad index pattern for " + name, line, col);
        };
        if (idx.size() == 1) {
            bool anti = idx[0].kind == Kind::AntiHol;
            int a = idx[0].label;
            if (name == "D")
                return anti ? ctx_.D1bar(a) : ctx_.D1(a);
            if (name == "E")
                return anti ? ctx_.E1bar(a) : ctx_.E1(a);
            return anti ? ctx_.G1bar(a) : ctx_.G1(a);
        }
        int a = idx[0].label, b = idx[1].label;
        if (a == b && idx[0].kind == idx[1].kind)
            throw parse_error(name + "[..] with a repeated letter of one kind", line, col);
        if (name == "D") {
            if (idx[0].kind == Kind::Hol && idx[1].kind == Kind::Hol)
                return ctx_.D2(a, b);
            if (idx[0].kind == Kind::AntiHol && idx[1].kind == Kind::AntiHol)
                return ctx_.D2bar(a, b);
            return bad();
        }
        if (name == "E") {
            if (idx[0].kind == Kind::Hol && idx[1].kind == Kind::AntiHol)
                return ctx_.E2(a, b);
            if (idx[0].kind == Kind::AntiHol && idx[1].kind == Kind::Hol)
                return ctx_.E2bar(a, b);
            return bad();
        }
        return bad();  // G takes one index
    }

    Expression parse_exp_weight() {
        int line = cur().line, col = cur().col;
        next();  // 'exp'
        expect_punct("(");
        // scan to the matching ')', requiring the body to end with '* f'
        std::vector<Token> body;
        int depth = 1;
        while (depth > 0) {
            if (cur().type == Token::End)
                fail("unterminated exp(...)");
            if (at_punct("("))
                ++depth;
            if (at_punct(")")) {
                --depth;
                if (depth == 0) {
                    next();
                    break;
                }
            }
            body.push_back(cur());
            next();
        }
        if (body.size() < 3 || !(body.back().type == Token::Ident && body.back().text == "f") ||
            !(body[body.size() - 2].type == Token::Punct && body[body.size() - 2].text == "*"))
            throw parse_error("exp argument must have the form (...)*f", line, col);
        body.resize(body.size() - 2);
        body.push_back({Token::End, "", line, col});
        ExprParser sub(std::move(body), ctx_);
        Expression weight = sub.parse_full();
        // must be a polynomial a + b n + c p with real rational coefficients
        if (weight.size() != 1 || !weight.monomials()[0].is_scalar_shape() ||
            !weight.monomials()[0].exp.is_identity())
            throw parse_error("exp weight must be a polynomial in n and p", line, col);
        Rational a, b, c;
        for (const auto& [k, v] : weight.monomials()[0].coeff.terms()) {
            if (!v.is_real() || k[2] != 0 || k[0] + k[1] > 1)
                throw parse_error("exp weight must be linear in n and p with real coefficients",
                                  line, col);
            if (k[0] == 1)
                b = v.re;
            else if (k[1] == 1)
                c = v.re;
            else
                a = v.re;
        }
        return Expression::exp_weight(a, b, c);
    }

    Expression parse_delta() {
        int line = cur().line, col = cur().col;
        next();  // 'delta'
        expect_punct("(");
        Idx x = parse_index();
        expect_punct(",");
        Idx y = parse_index();
        expect_punct(")");
        if (x.kind == Kind::T0 || y.kind == Kind::T0 || x.kind == y.kind)
            throw parse_error("delta takes one holomorphic and one antiholomorphic index", line,
                              col);
        if (x.kind == Kind::AntiHol)
            std::swap(x, y);
        return guarded([&] { return Expression::delta(x.label, y.label); });
    }

    Expression parse_z() {
        next();  // 'Z'
        expect_punct("[");
        Idx ix = parse_index();
        expect_punct("]");
        expect_punct("(");
        Expression inner = guarded([&] { return parse_expr(); });
        expect_punct(")");
        return guarded([&] { return z_derivative(inner, to_index(ix)); });
    }
};

}  // namespace detail

inline Expression parse(const std::string& src,
                        const BuilderContext& ctx = default_builders()) {
    try {
        detail::ExprParser p(detail::lex(src), ctx);
        return p.parse_full();
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception& e) {
        throw parse_error(e.what(), 0, 0);
    }
}

// --- printing -------------------------------------------------------------

namespace detail {

inline std::string exp_factor_to_string(const ExpFactor& e) {
    CoeffPoly poly = e.weight_poly();
    std::string body = poly.to_string();
    bool single = poly.size() <= 1;
    return "exp(" + (single ? body : "(" + body + ")") + "*f)";
}

inline std::string monomial_to_string(const Monomial& m) {
    std::vector<std::string> pieces;
    bool negate = false;
    std::string coeff;
    if (m.coeff.size() > 1) {
        coeff = "(" + m.coeff.to_string() + ")";
    } else {
        coeff = m.coeff.to_string();
        if (coeff.size() > 1 && coeff[0] == '-') {
            negate = true;
            coeff = coeff.substr(1);
        } else if (coeff == "-") {
            negate = true;
            coeff.clear();
        }
    }
    bool trivial_coeff = coeff == "1";
    if (!trivial_coeff)
        pieces.push_back(coeff);
    if (!m.exp.is_identity())
        pieces.push_back(exp_factor_to_string(m.exp));
    for (const auto& w : m.factors)
        pieces.push_back(word_to_string(w));
    for (const auto& d : m.deltas)
        pieces.push_back("delta(" + d.hol.to_string() + "," + d.antihol.to_string() + ")");
    if (pieces.empty())
        pieces.push_back("1");
    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i)
            out += "*";
        out += pieces[i];
    }
    return (negate ? "-" : "") + out;
}

}  // namespace detail

// Deterministic canonical text; parse(print(e)) reproduces e.
inline std::string print(const Expression& e) {
    if (e.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const Monomial& m : e.monomials()) {
        std::string piece = detail::monomial_to_string(m);
        if (first) {
            out = piece;
            first = false;
            continue;
        }
        if (!piece.empty() && piece[0] == '-')
            out += " - " + piece.substr(1);
        else
            out += " + " + piece;
    }
    return out;
}

}  // namespace crjet
