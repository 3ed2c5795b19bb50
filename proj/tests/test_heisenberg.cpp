#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crjet/yamabe_transform.hpp"

using namespace crjet;

namespace {

YamabeParams simple_params(int n) {
    YamabeParams p;
    p.lambda = Gaussian(Rational(0), Rational(1));  // lambda = i
    p.mu.assign(static_cast<std::size_t>(n), Gaussian());
    return p;
}

HFunc random_real_polynomial(Rng& rng, int n) {
    // random real polynomial: every term paired with its conjugate
    HFunc f(n);
    int terms = 2 + static_cast<int>(rng.below(3));
    for (int t = 0; t < terms; ++t) {
        HKey k;
        k.za.assign(static_cast<std::size_t>(n), 0);
        k.zb = k.za;
        for (int d = 0; d < 3; ++d) {
            int which = static_cast<int>(rng.below(3));
            std::size_t a = rng.below(static_cast<std::uint64_t>(n));
            if (which == 0)
                k.za[a] += 1;
            else if (which == 1)
                k.zb[a] += 1;
            else
                k.m += 1;
        }
        Gaussian c = rng.gaussian(3, 2);
        f.add(k, c);
        HKey kc = k;
        std::swap(kc.za, kc.zb);
        f.add(kc, c.conj());
    }
    return f;
}

}  // namespace

TEST_CASE("Z_a t = i zbar^a") {
    Rng rng(3);
    for (int n : {1, 2}) {
        HFunc t = HFunc::coordinate_t(n);
        for (int rep = 0; rep < 5; ++rep) {
            HPoint pt = random_h_point(rng, n);
            for (int a = 1; a <= n; ++a) {
                Gaussian got = z_apply(t, {Index::hol(a)}, pt);
                Gaussian want = Gaussian::i() * pt.z[static_cast<std::size_t>(a - 1)].conj();
                CHECK(got == want);
            }
        }
    }
}

TEST_CASE("kernel is annihilated by the conjugate fields") {
    YamabeParams params = simple_params(2);
    params.mu[0] = Gaussian(Rational(1, 2), Rational(1, 3));
    HFunc K = HFunc::kernel_power(params, 2, Rational(1), Rational(0), Gaussian(1));
    HFunc Kb = HFunc::kernel_power(params, 2, Rational(0), Rational(1), Gaussian(1));
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        HPoint pt = random_h_point(rng, 2);
        for (int a = 1; a <= 2; ++a) {
            CHECK(K.Zbar(a).eval_exact(pt).is_zero());
            CHECK(Kb.Z(a).eval_exact(pt).is_zero());
        }
    }
}

TEST_CASE("commutation rules under exact differentiation of random polynomials") {
    Rng rng(7);
    for (int n : {1, 2}) {
        for (int rep = 0; rep < 10; ++rep) {
            HFunc fn = random_real_polynomial(rng, n);
            HPoint pt = random_h_point(rng, n);
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    // f_{a b'} - f_{b' a} = 2i delta_{ab} f_0
                    Gaussian lhs = z_apply(fn, {Index::hol(a), Index::antihol(b)}, pt) -
                                   z_apply(fn, {Index::antihol(b), Index::hol(a)}, pt);
                    Gaussian corr = (a == b)
                                        ? Gaussian(Rational(0), Rational(2)) *
                                              z_apply(fn, {Index::t0()}, pt)
                                        : Gaussian();
                    CHECK(lhs == corr);
                    // holomorphic fields commute
                    CHECK(z_apply(fn, {Index::hol(a), Index::hol(b)}, pt) ==
                          z_apply(fn, {Index::hol(b), Index::hol(a)}, pt));
                }
            // the t-slot commutes with everything
            for (int a = 1; a <= n; ++a)
                CHECK(z_apply(fn, {Index::t0(), Index::hol(a)}, pt) ==
                      z_apply(fn, {Index::hol(a), Index::t0()}, pt));
        }
    }
}

TEST_CASE("mixed fourth derivatives of the kernel agree modulo commutators") {
    // brute-force over orderings of Z_1 Z_1' applied twice to the extremal
    Rng rng(11);
    for (int n : {1, 2}) {
        YamabeParams params = simple_params(n);
        HFunc v = HFunc::kernel_power(params, n, Rational(-n, 2), Rational(-n, 2), Gaussian(1));
        Rational shift(n + 8, 2);  // clears every exponent down to length 4
        for (int rep = 0; rep < 3; ++rep) {
            HPoint pt = random_h_point(rng, n);
            // v_{1 1' w} - v_{1' 1 w} = 2i v_{0 w} for the remaining word w
            std::vector<Word> tails = {{}, {Index::hol(1)}, {Index::antihol(1)}, {Index::t0()}};
            for (const Word& tail : tails) {
                Word w1 = {Index::hol(1), Index::antihol(1)};
                Word w2 = {Index::antihol(1), Index::hol(1)};
                Word w0 = {Index::t0()};
                for (const Index& ix : tail) {
                    w1.push_back(ix);
                    w2.push_back(ix);
                    w0.push_back(ix);
                }
                Gaussian d1 = v.apply(w1).eval_shifted(pt, shift, shift);
                Gaussian d2 = v.apply(w2).eval_shifted(pt, shift, shift);
                Gaussian d0 = v.apply(w0).eval_shifted(pt, shift, shift);
                CHECK(d1 - d2 == Gaussian(Rational(0), Rational(2)) * d0);
            }
        }
    }
}

TEST_CASE("yamabe_u basics") {
    YamabeParams params = simple_params(1);
    HPoint origin;
    origin.z.assign(1, Gaussian());
    origin.t = Rational(0);
    CHECK(yamabe_u(params, 1, origin) == doctest::Approx(1.0));  // |i|^{-1}

    YamabeParams doubled = params;
    doubled.C = Rational(2);
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        HPoint pt = random_h_point(rng, 1);
        double u1 = yamabe_u(params, 1, pt);
        CHECK(u1 > 0.0);
        CHECK(yamabe_u(doubled, 1, pt) == doctest::Approx(2.0 * u1));
    }

    YamabeParams bad = params;
    bad.lambda = Gaussian(Rational(1), Rational(0));  // Im = 0
    CHECK_THROWS_AS(yamabe_u(bad, 1, origin), std::invalid_argument);
}

TEST_CASE("denominator stays away from zero on random points") {
    Rng rng(17);
    YamabeParams params = simple_params(2);
    params.mu[0] = Gaussian(Rational(1, 2), Rational(0));
    REQUIRE(params.admissible());
    HFunc K = HFunc::kernel_power(params, 2, Rational(1), Rational(0), Gaussian(1));
    Rational best;
    bool first = true;
    for (int rep = 0; rep < 1000; ++rep) {
        HPoint pt = random_h_point(rng, 2);
        Rational norm = K.eval_exact(pt).norm2();
        CHECK(norm.sign() > 0);
        if (first || norm < best) {
            best = norm;
            first = false;
        }
    }
    CHECK(best.sign() > 0);
}

TEST_CASE("the extremal family solves the equation with a positive constant") {
    std::vector<YamabeParams> choices;
    {
        YamabeParams a = simple_params(1);
        choices.push_back(a);
        YamabeParams b = simple_params(1);
        b.lambda = Gaussian(Rational(1, 2), Rational(3));
        b.mu[0] = Gaussian(Rational(1), Rational(-1, 2));
        choices.push_back(b);
    }
    for (const auto& params : choices) {
        YamabeReport rep = check_yamabe_solves(params, 1, 20, 99);
        CHECK(rep.pass);
        CHECK(rep.ratio_constant);
        CHECK(rep.ratio.sign() > 0);
        CHECK(rep.C_solved > 0.0);
        CHECK(rep.max_rel_dev <= 1e-10);
    }
    YamabeParams p2 = simple_params(2);
    YamabeReport rep2 = check_yamabe_solves(p2, 2, 15, 101);
    CHECK(rep2.pass);

    YamabeParams bad = simple_params(1);
    bad.lambda = Gaussian(Rational(0), Rational(-1));
    CHECK_THROWS_AS(check_yamabe_solves(bad, 1, 20, 1), std::invalid_argument);
}

TEST_CASE("transformed-equation residual vanishes on induced jets") {
    for (int n : {1, 2}) {
        YamabeParams params = simple_params(n);
        CHECK(yamabe_transform_consistent(params, n, 10, 2024));
        // a wrong normalizing constant must be detected
        CHECK(!yamabe_transform_consistent(params, n, 10, 2024, /*sabotage=*/true));
    }
    // mu != 0 admissible family
    YamabeParams shifted = simple_params(2);
    shifted.mu[1] = Gaussian(Rational(1, 2), Rational(1, 2));
    CHECK(yamabe_transform_consistent(shifted, 2, 8, 77));
}
