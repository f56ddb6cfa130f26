#include <doctest.h>

#include <cmath>

#include "darboux/cantor.hpp"
#include "oracles.hpp"

using darboux::Interval;
using darboux::cantor::CoverRelation;

namespace {

__extension__ typedef __int128 i128;

// Brute-force relation of [i, j] / 2^30 to the depth-d cover.
CoverRelation brute_classify(std::int64_t i, std::int64_t j, int d)
{
    const i128 p3 = static_cast<i128>(darboux::cantor::pow3(d));
    const i128 two30 = static_cast<i128>(1) << 30;
    bool meets = false;
    for (auto [lo, hi] : oracle::cantor_cells(d)) {
        // cell [lo, hi] / 3^d against [i, j] / 2^30
        const i128 clo = static_cast<i128>(lo) * two30;
        const i128 chi = static_cast<i128>(hi) * two30;
        const i128 a = static_cast<i128>(i) * p3;
        const i128 b = static_cast<i128>(j) * p3;
        if (a <= clo && chi <= b)
            return CoverRelation::ContainsCell;
        if (clo <= b && a <= chi)
            meets = true;
    }
    return meets ? CoverRelation::Touches : CoverRelation::Disjoint;
}

} // namespace

TEST_CASE("cover cells oracle")
{
    CHECK(oracle::cantor_cells(2).size() == 4);
    CHECK(oracle::cantor_cells(2)[1] == std::pair<std::uint64_t, std::uint64_t>{2, 3});
    for (int d = 0; d <= 12; ++d)
        CHECK(static_cast<double>(oracle::cantor_cover_length(d)) == doctest::Approx(std::pow(2.0 / 3.0, d)));
}

TEST_CASE("classify matches brute force at small depths")
{
    oracle::Gen g(21);
    const std::int64_t one = std::int64_t{1} << 30;
    for (int d = 1; d <= 7; ++d) {
        for (int n = 0; n < 1500; ++n) {
            std::int64_t i = g.integer(0, static_cast<int>(one));
            std::int64_t j = g.integer(0, 3) == 0 ? i + g.integer(0, 1 << 12) : g.integer(0, static_cast<int>(one));
            j = std::min(j, one);
            if (i > j)
                std::swap(i, j);
            const Interval iv(std::ldexp(static_cast<double>(i), -30), std::ldexp(static_cast<double>(j), -30));
            CAPTURE(d);
            CAPTURE(i);
            CAPTURE(j);
            REQUIRE(darboux::cantor::classify(iv, d) == brute_classify(i, j, d));
        }
    }
}

TEST_CASE("classify outside the unit interval")
{
    CHECK(darboux::cantor::classify(Interval(1.5, 2)) == CoverRelation::Disjoint);
    CHECK(darboux::cantor::classify(Interval(-2, -1)) == CoverRelation::Disjoint);
    CHECK(darboux::cantor::classify(Interval(-1, 2)) == CoverRelation::ContainsCell);
    CHECK(darboux::cantor::classify(Interval(1.0)) == CoverRelation::Touches);
}

TEST_CASE("contains_point agrees with ternary long division")
{
    oracle::Gen g(22);
    int inside = 0;
    for (int n = 0; n < 20000; ++n) {
        const int s = g.integer(1, 20);
        const std::uint64_t q = std::uint64_t{1} << s;
        const std::uint64_t p = static_cast<std::uint64_t>(g.integer(0, static_cast<int>(q)));
        const double x = std::ldexp(static_cast<double>(p), -s);
        const auto got = darboux::cantor::contains_point(x);
        REQUIRE(got.has_value());
        CAPTURE(p);
        CAPTURE(s);
        REQUIRE(*got == oracle::cantor_contains(p, q));
        inside += *got ? 1 : 0;
    }
    CHECK(inside > 0);
    CHECK(*darboux::cantor::contains_point(0.25));
    CHECK(*darboux::cantor::contains_point(0.75));
    CHECK_FALSE(*darboux::cantor::contains_point(0.5));
    CHECK_FALSE(*darboux::cantor::contains_point(1.5));
    CHECK_FALSE(darboux::cantor::contains_point(std::ldexp(1.0, -200)).has_value());
}

TEST_CASE("next_cover_index matches the cell list")
{
    for (int d = 1; d <= 6; ++d) {
        const auto cells = oracle::cantor_cells(d);
        const std::uint64_t n = darboux::cantor::pow3(d);
        for (std::uint64_t m = 0; m < n; ++m) {
            std::optional<std::uint64_t> expect;
            for (auto [lo, hi] : cells)
                if (lo >= m) {
                    expect = lo;
                    break;
                }
            REQUIRE(darboux::cantor::next_cover_index(m, d) == expect);
        }
        CHECK_FALSE(darboux::cantor::next_cover_index(n, d).has_value());
    }
}
