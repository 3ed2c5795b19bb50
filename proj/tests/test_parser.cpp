#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crjet/normalize.hpp"
#include "crjet/parser.hpp"
#include "test_support.hpp"

using namespace crjet;
using crjet::testing::GenOptions;

TEST_CASE("grammar basics") {
    CHECK(parse("f[a]*f[a']") == default_builders().dfnorm2());
    CHECK(parse("0").is_zero());
    CHECK(parse("2*n - 2*n").is_zero());
    CHECK(parse("I*I") == Expression::constant(-1));
    CHECK(parse("3/2*p") == Expression::constant(CoeffPoly(Rational(3, 2)) * CoeffPoly::p()));
    CHECK(parse("n^3") ==
          Expression::constant(CoeffPoly::n() * CoeffPoly::n() * CoeffPoly::n()));
    CHECK(parse("exp((2+p)*f)*exp((2*n-2)*f)") == Expression::exp_weight(0, 2, 1));
    CHECK(parse("Re(Z[a'](G[a]))") == divergence(default_builders().G1(1)));
    CHECK(parse("delta(a,b')*f[b]") == parse("f[a]"));
}

TEST_CASE("commutation output prints with the stored delta") {
    Expression got = normalize(parse("f[a,b'] - f[b',a]"));
    CHECK(got == normalize(parse("2*I*delta(a,b')*f[0]")));
    CHECK(print(got) == "2*I*f[0]*delta(a,b')");
}

TEST_CASE("errors carry positions and names") {
    // syntax error
    try {
        parse("f[a] + * f[b]");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 1);
        CHECK(e.col >= 7);
    }
    // arity mismatch: E with two holomorphic slots
    CHECK_THROWS_WITH_AS(parse("E[a,b]"), doctest::Contains("bad index pattern"), parse_error);
    CHECK_THROWS_AS(parse("G[a,b]"), parse_error);
    CHECK_THROWS_AS(parse("D[a,b']"), parse_error);
    // a letter appearing three times
    CHECK_THROWS_WITH_AS(parse("f[a]*f[a]*f[a']"), doctest::Contains("occurs"), parse_error);
    // same-kind repetition cannot contract
    CHECK_THROWS_AS(parse("f[a]*f[a]"), parse_error);
    // signature mismatch inside a sum
    CHECK_THROWS_AS(parse("f[a] + f[b]"), parse_error);
    // malformed exponential weight
    CHECK_THROWS_AS(parse("exp(f)"), parse_error);
    CHECK_THROWS_AS(parse("exp((2+p)*g)"), parse_error);
    CHECK_THROWS_AS(parse("exp(n*n*f)"), parse_error);
    // unterminated bracket
    CHECK_THROWS_AS(parse("f[a"), parse_error);
    CHECK_THROWS_AS(parse("conj(f[a]"), parse_error);
}

TEST_CASE("print is deterministic and stable") {
    std::string first = print(parse("g"));
    for (int k = 0; k < 5; ++k)
        CHECK(print(parse("g")) == first);
    CHECK(print(Expression::zero()) == "0");
    // printed form re-parses to the identical expression
    Expression g = parse("g");
    CHECK(parse(print(g)) == g);
}

TEST_CASE("round-trip on 1000 seeded random expressions") {
    Rng rng(4242);
    GenOptions opt;
    opt.max_dummies = 3;
    opt.max_monomials = 3;
    int failures = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        Expression e = crjet::testing::random_expression(rng, opt);
        Expression back = parse(print(e));
        if (!(back == e) || !normalize(back - e).is_zero())
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("round-trip through normalization of catalog-flavored terms") {
    for (const char* src : {
             "Z[a'](G[a])",
             "E[a,b']*E[a',b] + D[a,b]*D[a',b']",
             "Re((D[a] + E[a])*f[a']*(p*exp((2+p)*f) - 1/2*p*f[b]*f[b']))",
         }) {
        Expression e = normalize(parse(src));
        CHECK(parse(print(e)) == e);
    }
}

TEST_CASE("round-trip of the normalized flagship left side") {
    Expression lhs = parse(
        "Re(Z[a'](exp((2*n-2)*f)*( (g + 3*I*f[0])*E[a] + (g - I*f[0])*D[a]"
        " - 3*I*f[0]*G[a] - 1/4*p*f[a]*f[b]*f[b']*f[c]*f[c'] )))");
    RewriteConfig cfg;
    cfg.use_pde = true;
    Expression norm = normalize(lhs, cfg);
    CHECK(norm.size() > 20);
    Expression back = parse(print(norm));
    CHECK(back == norm);
    CHECK(normalize(back - norm).is_zero());
}

TEST_CASE("fuzzing never crashes the parser") {
    Rng rng(777);
    const std::string charset = "fgDEGZIconjRep()[]'*+-/^=0123456789abcxyz ,.";
    int parsed_ok = 0, rejected = 0;
    for (int iter = 0; iter < 3000; ++iter) {
        std::string s;
        std::size_t len = 1 + rng.below(40);
        for (std::size_t i = 0; i < len; ++i)
            s += charset[rng.below(charset.size())];
        try {
            parse(s);
            ++parsed_ok;
        } catch (const parse_error&) {
            ++rejected;
        }
    }
    CHECK(parsed_ok + rejected == 3000);

    // mutations of valid inputs
    std::string base = "Re(Z[a'](exp((2*n-2)*f)*((g + 3*I*f[0])*E[a])))";
    for (int iter = 0; iter < 1000; ++iter) {
        std::string s = base;
        std::size_t pos = rng.below(s.size());
        s[pos] = charset[rng.below(charset.size())];
        try {
            parse(s);
        } catch (const parse_error&) {
        }
    }
}
