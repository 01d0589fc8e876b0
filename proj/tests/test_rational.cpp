#include <doctest.h>

#include <limits>
#include <random>

#include "ltd/rational.hpp"

using ltd::Rational;

TEST_CASE("rational normalizes sign and common factors") {
    const Rational a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(a.str() == "-3/2");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(0, -7) == Rational(0));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational arithmetic and ordering") {
    const Rational a(1, 3);
    const Rational b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(b < a);
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(abs(Rational(-5, 7)) == Rational(5, 7));
    CHECK_THROWS(a / Rational(0));
}

TEST_CASE("rational parse accepts integers, decimals and fractions") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-3.1") == Rational(-31, 10));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("+7/14") == Rational(1, 2));
    CHECK(Rational::parse("-2/6") == Rational(-1, 3));
    for (const char* bad : {"", "abc", "1/", "/2", "1/0", "1/-2", "1.2.3", "--1", "1e5"}) {
        CAPTURE(bad);
        CHECK_THROWS(Rational::parse(bad));
    }
}

TEST_CASE("rational overflow is detected, never wrapped") {
    const Rational big(std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(big + Rational(1), ltd::RationalOverflow);
    CHECK_THROWS_AS(big * Rational(2), ltd::RationalOverflow);
    CHECK_THROWS_AS(-Rational(std::numeric_limits<std::int64_t>::min()), ltd::RationalOverflow);
    // Cross-reduction keeps representable products representable.
    const Rational p(std::int64_t{1} << 40, 3);
    CHECK(p * Rational(3, std::int64_t{1} << 40) == Rational(1));
}

TEST_CASE("rational comparison agrees with exact cross multiplication") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> num(-1000000, 1000000);
    std::uniform_int_distribution<std::int64_t> den(1, 1000000);
    for (int k = 0; k < 2000; ++k) {
        const std::int64_t a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        const __int128 lhs = static_cast<__int128>(a) * d;
        const __int128 rhs = static_cast<__int128>(c) * b;
        CHECK((Rational(a, b) < Rational(c, d)) == (lhs < rhs));
        CHECK((Rational(a, b) == Rational(c, d)) == (lhs == rhs));
    }
}
