#include "herdsim/rational.hpp"

#include <doctest.h>

#include <cmath>

using namespace herdsim;

TEST_SUITE_BEGIN("rational");

TEST_CASE("parses fraction, integer and decimal forms") {
    CHECK(parse_rational("61/64") == Rat(61, 64));
    CHECK(parse_rational("15611/16384") == Rat(15611, 16384));
    CHECK(parse_rational("-3/9") == Rat(-1, 3));
    CHECK(parse_rational("7") == Rat(7));
    CHECK(parse_rational("0.984") == Rat(123, 125));
    CHECK(parse_rational("0.5002") == Rat(2501, 5000));
    CHECK(parse_rational("-1.25") == Rat(-5, 4));
    CHECK(parse_rational(" 1/2 ") == Rat(1, 2));
}

TEST_CASE("rejects malformed literals") {
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
}

TEST_CASE("format round-trips") {
    for (const char* s : {"61/64", "-5/4", "7", "123/125"}) {
        CHECK(format_rational(parse_rational(s)) == s);
    }
    CHECK(format_rational(parse_rational("0.25")) == "1/4");
}

TEST_CASE("integer powers") {
    CHECK(rat_pow(Rat(2, 3), 0) == Rat(1));
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(-1, 2), 5) == Rat(-1, 32));
}

TEST_CASE("OddsLog keeps log consistent with the exact odds") {
    const OddsLog o(Rat(16187, 197));
    CHECK(o.odds == Rat(16187, 197));
    CHECK(std::fabs(o.llr - std::log(16187.0 / 197.0)) < 1e-14);
}

TEST_SUITE_END();
