#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pb/error.hpp"
#include "pb/rational.hpp"

using pb::parse_rat;
using pb::Rat;
using pb::rat_floor;
using pb::rat_frac;
using pb::rat_of;
using pb::rat_str;

static bool throws_kind(const char* kind, const std::string& text) {
    try {
        parse_rat(text);
    } catch (const pb::Error& e) {
        return e.kind() == kind;
    }
    return false;
}

TEST_CASE("parse_rat accepts integers, decimals, fractions") {
    CHECK(parse_rat("123") == Rat(123));
    CHECK(parse_rat("-7") == Rat(-7));
    CHECK(parse_rat("0") == 0);
    CHECK(parse_rat("4.25") == rat_of(17, 4));
    CHECK(parse_rat("-4.25") == rat_of(-17, 4));
    CHECK(parse_rat("0.5") == rat_of(1, 2));
    CHECK(parse_rat("7/3") == rat_of(7, 3));
    CHECK(parse_rat("-7/3") == rat_of(-7, 3));
    CHECK(parse_rat("6/4") == rat_of(3, 2));
    CHECK(parse_rat("0.1") == rat_of(1, 10));
    CHECK(parse_rat("2.50") == rat_of(5, 2));
    CHECK(parse_rat("+5") == Rat(5));  // explicit plus sign is allowed
}

TEST_CASE("parse_rat rejects malformed text") {
    for (const char* bad : {"", "1e3", "1.2.3", "1/0", "a", "1 2", " 1", "1 ", "1/", "/2",
                            "--1", "+-1", "1.-2", "0x10", "1,5"}) {
        CAPTURE(bad);
        CHECK(throws_kind("MalformedNumber", bad));
    }
}

TEST_CASE("rat_str is shortest exact form and round-trips") {
    CHECK(rat_str(Rat(5)) == "5");
    CHECK(rat_str(Rat(-5)) == "-5");
    CHECK(rat_str(rat_of(17, 4)) == "4.25");
    CHECK(rat_str(rat_of(-17, 4)) == "-4.25");
    CHECK(rat_str(rat_of(1, 2)) == "0.5");
    CHECK(rat_str(rat_of(1, 10)) == "0.1");
    CHECK(rat_str(rat_of(7, 3)) == "7/3");
    CHECK(rat_str(rat_of(-7, 3)) == "-7/3");
    CHECK(rat_str(Rat(0)) == "0");

    for (long n = -30; n <= 30; ++n)
        for (long d = 1; d <= 12; ++d) {
            Rat x = rat_of(n, d);
            CAPTURE(n);
            CAPTURE(d);
            CHECK(parse_rat(rat_str(x)) == x);
        }
}

TEST_CASE("rat_frac renders canonical fractions") {
    CHECK(rat_frac(Rat(5)) == "5");
    CHECK(rat_frac(rat_of(1, 2)) == "1/2");
    CHECK(rat_frac(rat_of(17, 4)) == "17/4");
    CHECK(rat_frac(rat_of(-17, 4)) == "-17/4");
    CHECK(rat_frac(Rat(0)) == "0");
}

TEST_CASE("rat_floor floors toward negative infinity") {
    CHECK(rat_floor(rat_of(7, 2)) == 3);
    CHECK(rat_floor(rat_of(-7, 2)) == -4);
    CHECK(rat_floor(Rat(4)) == 4);
    CHECK(rat_floor(Rat(0)) == 0);
    CHECK(rat_floor(rat_of(-1, 3)) == -1);
}
