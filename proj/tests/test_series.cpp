#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kla/series.hpp"

using namespace kla;

namespace {
PolySeries poly(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return PolySeries::polynomial(v);
}
} // namespace

TEST_CASE("geometric inverse") {
    PolySeries q = poly({1, -1}).inverse(3);
    CHECK(q == poly({1, 1, 1, 1}).truncated(3));
}

TEST_CASE("inverse of 1 - 4t + t^2 satisfies the recurrence") {
    PolySeries q = poly({1, -4, 1}).inverse(3);
    CHECK(q.coeff(0) == 1);
    CHECK(q.coeff(1) == 4);
    CHECK(q.coeff(2) == 15);
    CHECK(q.coeff(3) == 56);
}

TEST_CASE("convolution picks out the degree-4 defect") {
    PolySeries a = poly({1, -4, 5});
    PolySeries b = poly({1, 4, 11, 24, 46});
    PolySeries prod = (a * b).truncated(4);
    CHECK(prod.coeff(0) == 1);
    CHECK(prod.coeff(1) == 0);
    CHECK(prod.coeff(2) == 0);
    CHECK(prod.coeff(3) == 0);
    CHECK(prod.coeff(4) == 5);
}

TEST_CASE("series inverse is two-sided for random unit series") {
    kla_test::Rng rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        PolySeries s;
        long c0 = 0;
        while (c0 == 0) c0 = rng.range(-4, 4);
        s = PolySeries::monomial(0, Rat(c0));
        for (int d = 1; d <= 6; ++d) {
            long c = rng.range(-5, 5);
            if (c != 0) s = s + PolySeries::monomial(d, Rat(c));
        }
        PolySeries inv = s.inverse(6);
        PolySeries lhs = (s * inv).truncated(6);
        PolySeries rhs = (inv * s).truncated(6);
        CHECK(lhs == PolySeries::one().truncated(6));
        CHECK(rhs == PolySeries::one().truncated(6));
    }
}

TEST_CASE("inversion requires a unit constant term") {
    CHECK_THROWS_AS(poly({0, 1}).inverse(4), DomainError);
}

TEST_CASE("no coefficients beyond the truncation") {
    PolySeries s = poly({1, 1}).truncated(2);
    CHECK_THROWS_AS(s.coeff(3), UsageError);
    CHECK(s.coeff(2) == 0);
}

TEST_CASE("polynomial evaluation") {
    PolySeries p = poly({1, 4, 1});
    CHECK(p.eval(rat(-1)) == rat(-2));
    CHECK(p.eval(rat(1, 2)) == rat(13, 4));
}
