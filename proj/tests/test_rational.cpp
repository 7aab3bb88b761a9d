#include <doctest.h>

#include "ptolemy/rational.hpp"

using namespace ptolemy;

TEST_CASE("rational arithmetic normalizes") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(1, 3) * Rat(3, 5)) == Rat(1, 5));
    CHECK((Rat(1, 3) / Rat(1, 6)) == Rat(2));
    CHECK((-Rat(1, 3)).str() == "-1/3");
    CHECK(Rat(7).str() == "7");
    CHECK(Rat::parse("-3/9") == Rat(-1, 3));
    CHECK(Rat::parse("5") == Rat(5));
}

TEST_CASE("rational overflow is detected") {
    Rat big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, Overflow);
}

TEST_CASE("matrix helpers") {
    RatMat a = {{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
    CHECK(rat_det(a) == Rat(-2));
    auto inv = rat_inverse(a);
    CHECK(rat_mul(a, inv) == rat_identity(2));
    RatMat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK(rat_det(sing) == Rat(0));
    CHECK_THROWS_AS(rat_inverse(sing), RankDeficient);
}
