#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normsched/dyadic.hpp"
#include "normsched/rational.hpp"

using namespace normsched;

TEST_CASE("normalization keeps the numerator odd") {
    Dyadic d(BigInt(6), 3);  // 6/8 = 3/4
    CHECK(d.numerator() == 3);
    CHECK(d.exponent() == 2);
    CHECK(Dyadic(BigInt(0), 7) == Dyadic::zero());
    CHECK(Dyadic::zero().exponent() == 0);
}

TEST_CASE("arithmetic is exact and closed") {
    Dyadic a(3, 1);  // 3/2
    Dyadic b(5, 2);  // 5/4
    CHECK((a + b).str() == "11/4");
    CHECK((a - b).str() == "1/4");
    CHECK((a * b).str() == "15/8");
    CHECK(a.half().str() == "3/4");
    CHECK(a.scaled(4).str() == "6");
    CHECK((-a).str() == "-3/2");
    CHECK(min(a, b) == b);
    CHECK(max(a, b) == a);
    CHECK(abs(Dyadic(-3, 1)) == a);
}

TEST_CASE("comparison is exact across exponents") {
    CHECK(Dyadic(1, 1) < Dyadic(3, 2));   // 1/2 < 3/4
    CHECK(Dyadic(1024) > Dyadic(2047, 1));
    CHECK(Dyadic(4) == Dyadic(BigInt(16), 2));
}

TEST_CASE("string round trip") {
    for (const char* text : {"0", "1", "-7", "3/2", "-5/8", "4503599627370497/2048"}) {
        Dyadic d = Dyadic::parse(text);
        CHECK(d.str() == text);
    }
    CHECK_THROWS(Dyadic::parse("1/3"));
    CHECK_THROWS(Dyadic::parse("1/0"));
    CHECK_THROWS(Dyadic::parse(""));
    CHECK(Dyadic::parse("6/4").str() == "3/2");
}

TEST_CASE("decimal expansion terminates exactly") {
    CHECK(Dyadic(3, 1).decimal_str() == "1.5");
    CHECK(Dyadic(-5, 3).decimal_str() == "-0.625");
    CHECK(Dyadic(7).decimal_str() == "7");
    CHECK(Dyadic(1, 4).decimal_str() == "0.0625");
}

TEST_CASE("l-normality per the dyadic grid") {
    CHECK(Dyadic(3, 1).is_l_normal(1));
    CHECK_FALSE(Dyadic(3, 1).is_l_normal(0));
    CHECK(Dyadic::zero().is_l_normal(7));
    CHECK(Dyadic(5).is_l_normal(0));
}

TEST_CASE("rational embedding is lossless") {
    Dyadic d(11, 3);
    Rational r = to_rational(d);
    CHECK(rational_str(r) == "11/8");
    auto back = to_dyadic(r);
    REQUIRE(back.has_value());
    CHECK(*back == d);
    CHECK_FALSE(to_dyadic(Rational(1, 3)).has_value());
}

TEST_CASE("random walk stays normalized") {
    // closure property: sums and differences of normalized values remain
    // normalized with odd (or zero) numerators
    Dyadic acc;
    std::uint64_t state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state;
    };
    for (int i = 0; i < 500; ++i) {
        Dyadic step(BigInt(static_cast<long long>(next() % 64) - 32), static_cast<unsigned>(next() % 8));
        acc = (i % 2 == 0) ? acc + step : acc - step;
        if (acc.exponent() > 0)
            CHECK(bit_test(acc.numerator() < 0 ? -acc.numerator() : acc.numerator(), 0));
        if (acc.is_zero()) CHECK(acc.exponent() == 0);
    }
}
