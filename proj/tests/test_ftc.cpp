#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "darboux/ftc.hpp"
#include "oracles.hpp"

using darboux::FtcVerdict;
using darboux::Interval;
using darboux::PrePrimitiveFn;
using darboux::VerdictKind;
using darboux::parse;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

TEST_CASE("ftc_check examples")
{
    const auto c = darboux::ftc_check(parse("cos(x)"), PrePrimitiveFn::symbolic(parse("sin(x)")), 0, kHalfPi, 1e-4,
                                      1000000);
    CHECK(c.verdict == FtcVerdict::Certified);
    CHECK(darboux::contains(c.integral_enclosure, 1.0));
    CHECK(darboux::contains(c.evaluation, 1.0));
    CHECK(c.sandwich_held);
    CHECK(c.partitions_checked == c.refinement.rounds + 1);
    CHECK(darboux::contains(darboux::widen(c.integral_enclosure, c.slack), c.evaluation));

    const auto d = darboux::ftc_check(parse("dirichlet(x)"), PrePrimitiveFn::symbolic(parse("x")), 0, 1, 1e-3,
                                      1000);
    CHECK(d.integrability == VerdictKind::NonIntegrable);
    CHECK(d.sandwich_held);
    CHECK(d.verdict == FtcVerdict::Inconclusive);
    CHECK(d.partitions_checked > 0);
    CHECK(d.evaluation == Interval(1));

    const auto x = darboux::ftc_check(parse("x"), PrePrimitiveFn::symbolic(parse("x^2/2 + 7")), 0, 1, 1e-4,
                                      1000000);
    CHECK(x.verdict == FtcVerdict::Certified);
    CHECK(x.evaluation == Interval(0.5));
}

TEST_CASE("ftc_check refutes a wrong primitive")
{
    const auto r = darboux::ftc_check(parse("x"), PrePrimitiveFn::symbolic(parse("x^2")), 0, 1, 1e-4, 100000);
    CHECK(r.verdict == FtcVerdict::Refuted);
    CHECK_FALSE(r.sandwich_held);
    REQUIRE(r.violation);
    CHECK(r.violation->upper.hi() < 1.0);
    CHECK(r.evaluation == Interval(1));
}

TEST_CASE("ftc_check degenerate and invalid intervals")
{
    const auto F = PrePrimitiveFn::symbolic(parse("sin(x)"));
    const auto z = darboux::ftc_check(parse("cos(x)"), F, 0.5, 0.5, 1e-6, 10);
    CHECK(z.verdict == FtcVerdict::Certified);
    CHECK(z.integral_enclosure == Interval(0));
    CHECK(z.evaluation == Interval(0));
    CHECK_THROWS_AS(darboux::ftc_check(parse("cos(x)"), F, 1, 0, 1e-6, 10), darboux::InvalidInterval);
    CHECK_THROWS_AS(darboux::ftc_check(parse("cos(x)"), F, 0, 1, 0, 10), darboux::NonPositiveTolerance);
}

TEST_CASE("property: constant offsets do not change the certificate")
{
    const auto f = parse("x");
    const auto base = darboux::ftc_check(f, PrePrimitiveFn::symbolic(parse("x^2/2")), 0, 1, 1e-3, 100000);
    for (const char* k : {"7", "-3.5", "1024", "0.25"}) {
        CAPTURE(k);
        const auto shifted = darboux::ftc_check(f, PrePrimitiveFn::symbolic(parse(std::string("x^2/2 + ") + k)), 0, 1,
                                                1e-3, 100000);
        CHECK(shifted.evaluation == base.evaluation);
        CHECK(shifted.verdict == base.verdict);
        CHECK(shifted.integral_enclosure == base.integral_enclosure);
    }
    // Non-dyadic offsets move the evaluation only by rounding.
    oracle::Gen g(51);
    const auto sin_base = darboux::ftc_check(parse("cos(x)"), PrePrimitiveFn::symbolic(parse("sin(x)")), 0, 1, 1e-3,
                                             100000);
    for (int i = 0; i < 5; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "sin(x) + %.17g", g.uniform(-100, 100));
        const auto s = darboux::ftc_check(parse("cos(x)"), PrePrimitiveFn::symbolic(parse(buf)), 0, 1, 1e-3, 100000);
        CHECK(s.verdict == sin_base.verdict);
        CHECK(darboux::intersects(s.evaluation, sin_base.evaluation));
    }
}

TEST_CASE("integral_function examples")
{
    const std::vector<double> xs{std::numbers::pi / 6, kHalfPi};
    const auto t = darboux::integral_function(parse("cos(x)"), 0, xs, {1000000, 0}, 1e-5);
    REQUIRE(t.size() == 2);
    CHECK(darboux::contains(t[0].enclosure, 0.5));
    CHECK(darboux::contains(t[1].enclosure, 1.0));
    CHECK(t[0].verdict == VerdictKind::Integrable);
    CHECK(darboux::width(t[1].enclosure) <= 1e-5);

    const std::vector<double> one{1.0};
    const double tol = 1e-2;
    const auto c = darboux::integral_function(parse("cantor(x)"), 0, one, {1000000, 0}, tol);
    CHECK(darboux::contains(Interval(0, tol), c[0].enclosure));
    CHECK(c[0].lower == Interval(0));

    const auto fl = darboux::integral_function(parse("floor(3*x)"), 0, one, {1000000, 0}, 1e-3);
    CHECK(darboux::contains(fl[0].enclosure, 1.0));
    CHECK(fl[0].verdict == VerdictKind::Integrable);

    const auto d = darboux::integral_function(parse("dirichlet(x)"), 0, one, {1000, 0}, 1e-3);
    CHECK(d[0].verdict == VerdictKind::Inconclusive);
    CHECK(d[0].lower == Interval(0));
    CHECK(d[0].upper == Interval(1));
}

TEST_CASE("property: basepoint shift is a constant")
{
    const auto f = parse("exp(x) + floor(3*x)");
    std::vector<double> xs;
    oracle::Gen g(52);
    for (int i = 0; i < 12; ++i)
        xs.push_back(g.uniform(0, 1));
    const double tol = 1e-4;
    const darboux::PrePrimitiveOptions o{1000000, 0};
    const auto t0 = darboux::integral_function(f, 0.0, xs, o, tol);
    const auto t1 = darboux::integral_function(f, 0.5, xs, o, tol);
    const std::vector<double> half{0.5};
    const Interval shift = darboux::integral_function(f, 0.0, half, o, tol)[0].enclosure;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CAPTURE(xs[i]);
        REQUIRE(darboux::intersects(t0[i].enclosure - t1[i].enclosure, darboux::widen(shift, 1e-12)));
    }
}

TEST_CASE("property: orientation below the basepoint")
{
    oracle::Gen g(53);
    for (const char* src : {"x", "cos(x)", "floor(3*x)", "cantor(x)", "dirichlet(x)"}) {
        const auto f = parse(src);
        for (int i = 0; i < 5; ++i) {
            const double x = g.uniform(0, 0.5);
            const double c = g.uniform(0.5, 1);
            const std::vector<double> below{x};
            const std::vector<double> above{c};
            const auto back = darboux::integral_function(f, c, below, {2000, 0}, 1e-3);
            const auto fwd = darboux::integral_function(f, x, above, {2000, 0}, 1e-3);
            REQUIRE(back[0].lower == -fwd[0].lower);
            REQUIRE(back[0].upper == -fwd[0].upper);
        }
    }
}

TEST_CASE("tabulation is Lipschitz")
{
    std::vector<double> xs;
    for (int i = 0; i <= 20; ++i)
        xs.push_back(i * kHalfPi / 20);
    const auto t = darboux::integral_function(parse("cos(x)"), 0, xs, {100000, 0}, 1e-3);
    const auto rep = darboux::check_tabulation_lipschitz(parse("cos(x)"), 0, t);
    CHECK(rep.verdict == darboux::CheckVerdict::ConsistentAtResolution);
    CHECK(rep.lipschitz_constant == 1.0);
    CHECK(rep.samples_checked == 20);

    auto fake = t;
    fake[10].enclosure = Interval(5.0);
    CHECK(darboux::check_tabulation_lipschitz(parse("cos(x)"), 0, fake).verdict == darboux::CheckVerdict::Refuted);
}
