#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crjet/rational.hpp"

using namespace crjet;

TEST_CASE("bigint basics") {
    CHECK(BigInt(0).is_zero());
    CHECK(BigInt(-5).to_string() == "-5");
    CHECK((BigInt(1000000007) * BigInt(998244353)).to_string() == "998244359987710471");
    CHECK(BigInt::from_string("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
    BigInt a = BigInt::from_string("987654321098765432109876543210");
    BigInt b = BigInt::from_string("12345678901234567");
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(r < b);
    CHECK((a - a).is_zero());
    CHECK(BigInt::gcd(BigInt(48), BigInt(-36)) == BigInt(12));
}

TEST_CASE("bigint division stress") {
    Rng rng(42);
    for (int iter = 0; iter < 500; ++iter) {
        BigInt a(static_cast<long long>(rng.next() >> 1));
        BigInt b(static_cast<long long>(rng.next() >> 1));
        for (int k = 0; k < static_cast<int>(rng.below(3)); ++k)
            a = a * BigInt(static_cast<long long>(rng.next() >> 1));
        if (rng.chance(1, 2))
            a = -a;
        if (b.is_zero())
            continue;
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
    }
}

TEST_CASE("rational arithmetic") {
    Rational half(1, 2), third(1, 3);
    CHECK((half + third) == Rational(5, 6));
    CHECK((half * third) == Rational(1, 6));
    CHECK((half - half).is_zero());
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 3).pow_int(3) == Rational(343, 27));
    CHECK(Rational(2).pow_int(-2) == Rational(1, 4));
    CHECK(Rational::from_string("-3/9") == Rational(-1, 3));
    CHECK_THROWS_AS(Rational(1, 0), arithmetic_error);
}

TEST_CASE("rational overflow falls back to exact bigint") {
    Rational big(3037000499LL, 1);  // sqrt of int64 max, squared overflows
    Rational prod = big * big * big;
    CHECK(prod.to_string() == "28011385460385661648235251499");
    Rational sum = prod + Rational(1, 3);
    CHECK((sum - prod) == Rational(1, 3));
    // stays exact through mixed chains
    Rational x = prod / Rational(3037000499LL, 7);
    CHECK(x == big * big * Rational(7));
}

TEST_CASE("gaussian field ops") {
    Gaussian i = Gaussian::i();
    CHECK((i * i) == Gaussian(Rational(-1)));
    Gaussian z(Rational(3, 2), Rational(-2));
    CHECK(z.conj() == Gaussian(Rational(3, 2), Rational(2)));
    CHECK((z * z.conj()).is_real());
    CHECK((z / z) == Gaussian(Rational(1)));
    CHECK(z.norm2() == Rational(9, 4) + Rational(4));
}

TEST_CASE("rng determinism") {
    Rng a(7), b(7);
    for (int k = 0; k < 100; ++k)
        CHECK(a.next() == b.next());
}
