#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "darboux/gallery.hpp"
#include "darboux/preprimitive.hpp"
#include "oracles.hpp"

using darboux::CheckVerdict;
using darboux::Interval;
using darboux::PrePrimitiveFn;
using darboux::Side;
using darboux::parse;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Lower sum of x on [0, 1] after `rounds` greedy bisections: all cells are
// bisected level by level, leftmost first, so the widths are known.
double greedy_identity_lower(long rounds)
{
    const long n = rounds + 1;
    long k = 0;
    while ((2L << k) <= n)
        ++k;
    const long m = n - (1L << k); // cells of level k that were split again
    const long double sq = static_cast<long double>((1L << k) - m) * std::pow(4.0L, -k) +
                           static_cast<long double>(2 * m) * std::pow(4.0L, -(k + 1));
    return static_cast<double>((1.0L - sq) / 2.0L);
}

darboux::PairOptions pairs(std::size_t n, std::vector<double> jumps = {})
{
    darboux::PairOptions o;
    o.pairs = n;
    o.seed = 0;
    o.discontinuities = std::move(jumps);
    return o;
}

} // namespace

TEST_CASE("lower pre-primitive of x")
{
    const auto F = darboux::build_lower_preprimitive(parse("x"), 0, {1000, 0});
    const Interval v = F(1.0);
    CHECK(darboux::contains(v, 0.5));
    CHECK(v.lo() == greedy_identity_lower(1000));
    CHECK(v.lo() > 0.4994);
    CHECK(v.lo() < 0.5);
    CHECK(darboux::width(v) < 2e-3);
    // Larger budgets tighten the enclosure.
    const auto G = darboux::build_lower_preprimitive(parse("x"), 0, {100000, 0});
    CHECK(darboux::width(G(1.0)) < darboux::width(v));
    CHECK(G(1.0).lo() >= v.lo());
}

TEST_CASE("dirichlet pre-primitives")
{
    const auto d = parse("dirichlet(x)");
    const auto lower = darboux::build_lower_preprimitive(d, 0);
    const auto upper = darboux::build_upper_preprimitive(d, 0);
    oracle::Gen g(41);
    for (int i = 0; i < 50; ++i) {
        const double x = g.uniform(-2, 2);
        REQUIRE(lower(x) == Interval(0));
    }
    CHECK(upper(1.0) == Interval(1));
    CHECK(upper(0.5) == Interval(0.5));
    CHECK(upper(-1.0) == Interval(-1));
}

TEST_CASE("value at the basepoint is zero")
{
    for (const auto& e : darboux::builtin_gallery()) {
        const double c = e.domain.mid();
        CHECK(darboux::build_lower_preprimitive(e.f, c)(c) == Interval(0));
        CHECK(darboux::build_upper_preprimitive(e.f, c)(c) == Interval(0));
    }
}

TEST_CASE("orientation below the basepoint")
{
    const auto f = parse("x^2");
    const auto F = darboux::build_lower_preprimitive(f, 1.0, {2000, 0});
    const auto G = darboux::build_lower_preprimitive(f, 0.0, {2000, 0});
    CHECK(F(0.0) == -G(1.0));
    CHECK(darboux::contains(F(0.0), -1.0 / 3.0));
}

TEST_CASE("sandwich examples")
{
    const auto half_square = PrePrimitiveFn::symbolic(parse("x^2/2"));
    CHECK(darboux::check_sandwich(half_square, parse("x"), 0, 1, pairs(1000)).verdict ==
          CheckVerdict::ConsistentAtResolution);

    const auto twice = darboux::check_sandwich(PrePrimitiveFn::symbolic(parse("2*x")), parse("dirichlet(x)"), 0, 1,
                                               pairs(1000));
    CHECK(twice.verdict == CheckVerdict::Refuted);
    REQUIRE_FALSE(twice.witnesses.empty());
    CHECK(twice.violations == twice.samples_checked);
    for (const auto& w : twice.witnesses) {
        CHECK(w.x != w.y);
        CHECK(darboux::contains(w.quotient, 2.0));
        CHECK(w.bound == Interval(0, 1));
        CHECK_FALSE(darboux::intersects(w.quotient, w.bound));
    }

    const auto slope_one = darboux::check_sandwich(PrePrimitiveFn::symbolic(parse("x")), parse("dirichlet(x)"), 0,
                                                   1, pairs(1000));
    CHECK(slope_one.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(slope_one.samples_checked == 1000);
}

TEST_CASE("lipschitz examples")
{
    const auto F = darboux::build_lower_preprimitive(parse("cos(x)"), 0, {256, 0});
    const auto rep = darboux::check_lipschitz(F, parse("cos(x)"), 0, kHalfPi, pairs(1000));
    CHECK(rep.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(rep.lipschitz_constant == 1.0);

    const auto d = darboux::check_lipschitz(PrePrimitiveFn::symbolic(parse("x")), parse("dirichlet(x)"), 0, 1,
                                            pairs(1000));
    CHECK(d.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(d.lipschitz_constant == 1.0);

    // x^2 is not a pre-primitive of x: quotients x + y reach 6 > L = 3.
    const auto sq = PrePrimitiveFn::symbolic(parse("x^2"));
    const auto lip = darboux::check_lipschitz(sq, parse("x"), 0, 3, pairs(1000));
    CHECK(lip.lipschitz_constant == 3.0);
    CHECK(lip.verdict == CheckVerdict::Refuted);
    REQUIRE_FALSE(lip.witnesses.empty());
    CHECK(lip.witnesses.front().quotient.lo() > 3.0);
    const auto sand = darboux::check_sandwich(sq, parse("x"), 0, 3, pairs(1000));
    CHECK(sand.verdict == CheckVerdict::Refuted);

    // The pair (2.9, 3) by hand.
    CHECK(darboux::contains(darboux::difference_quotient(sq, 2.9, 3.0), 5.9));
}

TEST_CASE("one-sided derivative examples")
{
    const auto hs = darboux::default_h_schedule();
    CHECK(hs.size() == 17);
    CHECK(hs.front() == 0.0625);
    CHECK(hs.back() == std::ldexp(1.0, -20));

    const auto cos_f = parse("cos(x)");
    const auto F = darboux::build_lower_preprimitive(cos_f, 0);
    const auto r = darboux::check_one_sided_derivative(F, cos_f, 0.0, Side::Right, hs, 1e-3);
    CHECK(r.verdict == CheckVerdict::ConsistentAtResolution);
    REQUIRE(r.estimate);
    CHECK(darboux::distance(*r.estimate, Interval(1.0)) <= 1e-3);
    CHECK(r.stabilized_at.has_value());

    const auto step = parse("step(0.5, 0, 1)");
    const auto S = darboux::build_lower_preprimitive(step, 0);
    const auto right = darboux::check_one_sided_derivative(S, step, 0.5, Side::Right, hs, 1e-3);
    CHECK(right.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(darboux::distance(*right.estimate, Interval(1.0)) <= 1e-3);
    const auto left = darboux::check_one_sided_derivative(S, step, 0.5, Side::Left, hs, 1e-3);
    CHECK(left.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(darboux::distance(*left.estimate, Interval(0.0)) <= 1e-3);

    const auto sign = darboux::check_one_sided_derivative(PrePrimitiveFn::symbolic(parse("abs(x)")),
                                                          parse("sign(x)"), 0.0, Side::Right, hs, 1e-3);
    CHECK(sign.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(*sign.estimate == Interval(1.0));

    const auto wrong = darboux::check_one_sided_derivative(PrePrimitiveFn::symbolic(parse("2*x")), parse("x"),
                                                           0.5, Side::Right, hs, 1e-3);
    CHECK(wrong.verdict == CheckVerdict::Refuted);
    CHECK(wrong.witnesses.size() == 1);

    // Quotients of a tiny budget never settle.
    const auto coarse = darboux::build_lower_preprimitive(parse("x^2"), 0, {1, 0});
    const auto never = darboux::check_one_sided_derivative(coarse, parse("x^2"), 0.5, Side::Right, hs, 1e-9);
    CHECK(never.verdict == CheckVerdict::Inconclusive);
}

TEST_CASE("darboux quotients at interior points")
{
    // Quotients come from the integral over [x, x + h], so they settle at h = 2^-20
    // even though F(x) itself is only known to about 1e-4.
    const auto hs = darboux::default_h_schedule();
    const auto f = parse("x^2");
    const auto F = darboux::build_lower_preprimitive(f, 0, {256, 0});
    CHECK(darboux::width(F(0.75)) > 1e-6);
    const auto r = darboux::check_one_sided_derivative(F, f, 0.75, Side::Left, hs, 1e-3);
    CHECK(r.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(darboux::distance(*r.estimate, Interval(0.5625)) <= 1e-3);
    const Interval q = darboux::difference_quotient(F, 0.5, 0.5 + 0x1p-20);
    CHECK(darboux::contains(q, 0.25 + 0x1p-21));
    CHECK(darboux::width(q) < 1e-6);
}

TEST_CASE("constant difference examples")
{
    const auto cos_f = parse("cos(x)");
    const darboux::PrePrimitiveOptions o{1000000, 2.5e-5};
    const auto L = darboux::build_lower_preprimitive(cos_f, 0, o);
    const auto U = darboux::build_upper_preprimitive(cos_f, 0, o);
    const auto rep = darboux::check_constant_difference(L, U, 0, kHalfPi, 11, 1e-4);
    CHECK(rep.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(rep.hull_width <= 1e-4 + rep.slack);
    CHECK(rep.samples_checked == 11);

    const auto zero = PrePrimitiveFn::symbolic(parse("0"));
    const auto ident = PrePrimitiveFn::symbolic(parse("x"));
    const auto d = darboux::check_constant_difference(zero, ident, 0, 1, 11, 1e-3);
    CHECK(d.verdict == CheckVerdict::Refuted);
    CHECK(d.separation == 1.0);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].x == 1.0);
    CHECK(d.witnesses[0].y == 0.0);

    const auto same = darboux::check_constant_difference(ident, ident, 0, 1, 11, 1e-3);
    CHECK(same.verdict == CheckVerdict::ConsistentAtResolution);
    CHECK(same.hull_width == 0.0);

    // Coarse enclosures that neither separate nor fit the band.
    const auto coarse = darboux::build_lower_preprimitive(cos_f, 0, {2, 0});
    const auto wide = darboux::check_constant_difference(coarse, U, 0, kHalfPi, 5, 1e-6);
    CHECK(wide.verdict == CheckVerdict::Inconclusive);

    CHECK_THROWS_AS(darboux::check_constant_difference(ident, ident, 0, 1, 1, 1e-3), darboux::InvalidPartition);
    CHECK_THROWS_AS(darboux::check_constant_difference(ident, ident, 1, 0, 3, 1e-3), darboux::InvalidInterval);
}

TEST_CASE("sample_pairs")
{
    darboux::PairOptions o = pairs(500, {0.5});
    const auto p = darboux::sample_pairs(0, 1, o);
    CHECK(p.size() == 500);
    CHECK(p == darboux::sample_pairs(0, 1, o));
    CHECK(p.front() == std::pair<double, double>{0.0, 1.0});
    bool near = false;
    bool straddle = false;
    for (auto [x, y] : p) {
        REQUIRE(x != y);
        REQUIRE(0.0 <= std::min(x, y));
        REQUIRE(std::max(x, y) <= 1.0);
        near = near || std::fabs(x - y) < 2e-9;
        straddle = straddle || (std::min(x, y) < 0.5 && 0.5 < std::max(x, y) && std::fabs(x - y) < 1e-8);
    }
    CHECK(near);
    CHECK(straddle);
    o.seed = 1;
    CHECK(darboux::sample_pairs(0, 1, o) != p);
}

TEST_CASE("property: lower pre-primitive passes its own sandwich")
{
    for (const auto& e : darboux::builtin_gallery()) {
        CAPTURE(e.name);
        const double a = e.domain.lo();
        const double b = e.domain.hi();
        const auto F = darboux::build_lower_preprimitive(e.f, a, {128, 0});
        const auto rep = darboux::check_sandwich(F, e.f, a, b, pairs(200, e.discontinuities));
        CHECK(rep.verdict == CheckVerdict::ConsistentAtResolution);
        const auto G = darboux::build_upper_preprimitive(e.f, e.domain.mid(), {128, 0});
        CHECK(darboux::check_sandwich(G, e.f, a, b, pairs(200, e.discontinuities)).verdict ==
              CheckVerdict::ConsistentAtResolution);
    }
}

TEST_CASE("property: quotients are symmetric")
{
    oracle::Gen g(42);
    for (const auto& e : darboux::builtin_gallery()) {
        const auto F = darboux::build_lower_preprimitive(e.f, e.domain.lo(), {64, 0});
        const auto S = e.primitive ? PrePrimitiveFn::symbolic(*e.primitive) : F;
        for (int i = 0; i < 50; ++i) {
            const double x = g.uniform(e.domain.lo(), e.domain.hi());
            const double y = g.uniform(e.domain.lo(), e.domain.hi());
            if (x == y)
                continue;
            REQUIRE(darboux::difference_quotient(F, x, y) == darboux::difference_quotient(F, y, x));
            REQUIRE(darboux::difference_quotient(S, x, y) == darboux::difference_quotient(S, y, x));
        }
    }
}

TEST_CASE("property: increasing f gives quotients increasing in the right endpoint")
{
    const auto f = parse("floor(3*x)");
    const auto F = darboux::build_lower_preprimitive(f, 0, {4096, 0});
    oracle::Gen g(43);
    for (int i = 0; i < 100; ++i) {
        const double x = g.uniform(0, 0.9);
        const double y1 = g.uniform(x + 0.01, 1.0);
        const double y2 = g.uniform(y1, 1.0);
        if (y1 == y2)
            continue;
        const Interval q1 = darboux::difference_quotient(F, x, y1);
        const Interval q2 = darboux::difference_quotient(F, x, y2);
        REQUIRE(q1.lo() <= q2.hi());
    }
}

TEST_CASE("memo is safe under concurrent queries")
{
    const auto f = parse("cos(x) + floor(3*x)");
    const auto shared = darboux::build_lower_preprimitive(f, 0, {512, 0});
    std::vector<double> xs;
    for (int i = 1; i <= 64; ++i)
        xs.push_back(i / 64.0);
    std::vector<std::vector<Interval>> results(8);
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < results.size(); ++t)
            threads.emplace_back([&, t] {
                for (std::size_t k = 0; k < xs.size(); ++k)
                    results[t].push_back(shared(xs[(k + 7 * t) % xs.size()]));
            });
    }
    const auto fresh = darboux::build_lower_preprimitive(f, 0, {512, 0});
    for (std::size_t t = 0; t < results.size(); ++t)
        for (std::size_t k = 0; k < xs.size(); ++k)
            REQUIRE(results[t][k] == fresh(xs[(k + 7 * t) % xs.size()]));
}

TEST_CASE("names")
{
    CHECK(darboux::to_string(darboux::Property::SandwichDefA) == "sandwich");
    CHECK(darboux::to_string(darboux::CheckVerdict::Refuted) == "refuted");
    CHECK(PrePrimitiveFn::symbolic(parse("x^2/2")).describe() == "x^2/2");
}
