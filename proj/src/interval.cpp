#include "darboux/interval.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <numbers>

namespace darboux {

namespace rounding {

namespace {

// Below this magnitude fma residuals may themselves be rounded.
constexpr double kResidualFloor = 0x1p-960;

int sign_of(double e) noexcept
{
    return e > 0 ? kAbove : (e < 0 ? kBelow : kExact);
}

void check_finite(double v)
{
    if (!std::isfinite(v))
        throw IntervalOverflow();
}

} // namespace

Rounded add(double a, double b)
{
    const double s = a + b;
    check_finite(s);
    // TwoSum (Knuth): exact for any finite inputs.
    const double bp = s - a;
    const double ap = s - bp;
    const double e = (a - ap) + (b - bp);
    return {s, sign_of(e)};
}

Rounded mul(double a, double b)
{
    const double p = a * b;
    check_finite(p);
    if (a == 0.0 || b == 0.0)
        return {p, kExact};
    if (std::fabs(p) < kResidualFloor)
        return {p, kUnknown};
    return {p, sign_of(std::fma(a, b, -p))};
}

Rounded div(double a, double b)
{
    const double q = a / b;
    check_finite(q);
    if (a == 0.0)
        return {q, kExact};
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor)
        return {q, kUnknown};
    // a - q*b is exactly representable for a correctly rounded quotient.
    const double r = std::fma(-q, b, a);
    const int rs = sign_of(r);
    return {q, b > 0 ? rs : -rs};
}

Rounded sqrt(double a)
{
    const double s = std::sqrt(a);
    if (a == 0.0)
        return {s, kExact};
    if (a < kResidualFloor)
        return {s, kUnknown};
    const double r = std::fma(s, s, -a);
    // s*s > a means s overshoots the true root.
    return {s, r > 0 ? kBelow : (r < 0 ? kAbove : kExact)};
}

double step(double x) noexcept
{
    const double m = std::max(std::fabs(x), std::numeric_limits<double>::min());
    return m * std::numeric_limits<double>::epsilon();
}

} // namespace rounding

using rounding::down;
using rounding::next_down;
using rounding::next_up;
using rounding::up;

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidInterval("interval endpoints must be finite");
    if (lo > hi)
        throw InvalidInterval("interval lower endpoint exceeds upper endpoint");
}

double Interval::mid() const noexcept
{
    return std::midpoint(lo_, hi_);
}

Tracked add_tracked(const Interval& a, const Interval& b)
{
    const auto l = rounding::add(a.lo(), b.lo());
    const auto h = rounding::add(a.hi(), b.hi());
    return {Interval(down(l), up(h)), l.exact() && h.exact()};
}

Tracked sub_tracked(const Interval& a, const Interval& b)
{
    const auto l = rounding::add(a.lo(), -b.hi());
    const auto h = rounding::add(a.hi(), -b.lo());
    return {Interval(down(l), up(h)), l.exact() && h.exact()};
}

namespace {

// Point times interval: two products suffice.
Tracked scale_tracked(double k, const Interval& b)
{
    const auto l = rounding::mul(k, k >= 0.0 ? b.lo() : b.hi());
    const auto h = rounding::mul(k, k >= 0.0 ? b.hi() : b.lo());
    return {Interval(down(l), up(h)), l.exact() && h.exact()};
}

} // namespace

Tracked mul_tracked(const Interval& a, const Interval& b)
{
    if (a.is_degenerate())
        return scale_tracked(a.lo(), b);
    if (b.is_degenerate())
        return scale_tracked(b.lo(), a);
    const std::array<rounding::Rounded, 4> p{
        rounding::mul(a.lo(), b.lo()),
        rounding::mul(a.lo(), b.hi()),
        rounding::mul(a.hi(), b.lo()),
        rounding::mul(a.hi(), b.hi()),
    };
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    bool exact = true;
    for (const auto& r : p) {
        lo = std::min(lo, down(r));
        hi = std::max(hi, up(r));
        exact = exact && r.exact();
    }
    return {Interval(lo, hi), exact};
}

Tracked div_tracked(const Interval& a, const Interval& b)
{
    if (contains(b, 0.0))
        throw DivisionByZeroInterval();
    const std::array<rounding::Rounded, 4> q{
        rounding::div(a.lo(), b.lo()),
        rounding::div(a.lo(), b.hi()),
        rounding::div(a.hi(), b.lo()),
        rounding::div(a.hi(), b.hi()),
    };
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    bool exact = true;
    for (const auto& r : q) {
        lo = std::min(lo, down(r));
        hi = std::max(hi, up(r));
        exact = exact && r.exact();
    }
    return {Interval(lo, hi), exact};
}

namespace {

// Enclosure of v^n for a single double v >= 0.
Tracked nonneg_power(double v, unsigned n)
{
    double lo = 1.0;
    double hi = 1.0;
    bool exact = true;
    for (unsigned i = 0; i < n; ++i) {
        const auto l = rounding::mul(lo, v);
        const auto h = rounding::mul(hi, v);
        exact = exact && l.exact() && h.exact();
        lo = down(l);
        hi = up(h);
    }
    return {Interval(lo, hi), exact};
}

// Enclosure of v^n for any double v.
Tracked signed_power(double v, unsigned n)
{
    if (v >= 0.0 || n % 2 == 0)
        return nonneg_power(std::fabs(v), n);
    const auto t = nonneg_power(-v, n);
    return {-t.value, t.exact};
}

} // namespace

Tracked pow_tracked(const Interval& a, unsigned n)
{
    if (n == 0)
        return {Interval(1.0), true};
    if (n == 1)
        return {a, true};
    if (n % 2 == 1) {
        const auto l = signed_power(a.lo(), n);
        const auto h = signed_power(a.hi(), n);
        return {Interval(l.value.lo(), h.value.hi()), l.exact && h.exact};
    }
    const Interval m = abs(a);
    const auto l = nonneg_power(m.lo(), n);
    const auto h = nonneg_power(m.hi(), n);
    return {Interval(l.value.lo(), h.value.hi()), l.exact && h.exact};
}

Interval operator+(const Interval& a, const Interval& b) { return add_tracked(a, b).value; }
Interval operator-(const Interval& a, const Interval& b) { return sub_tracked(a, b).value; }
Interval operator*(const Interval& a, const Interval& b) { return mul_tracked(a, b).value; }
Interval operator/(const Interval& a, const Interval& b) { return div_tracked(a, b).value; }

Interval operator-(const Interval& a)
{
    return Interval(-a.hi(), -a.lo());
}

Interval scale(const Interval& a, double k)
{
    return a * Interval(k);
}

Interval hull(const Interval& a, const Interval& b)
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

double width(const Interval& a)
{
    return up(rounding::add(a.hi(), -a.lo()));
}

double mag(const Interval& a) noexcept
{
    return std::max(std::fabs(a.lo()), std::fabs(a.hi()));
}

bool contains(const Interval& a, double x) noexcept
{
    return a.lo() <= x && x <= a.hi();
}

bool contains(const Interval& outer, const Interval& inner) noexcept
{
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

bool intersects(const Interval& a, const Interval& b) noexcept
{
    return a.lo() <= b.hi() && b.lo() <= a.hi();
}

double distance(const Interval& a, const Interval& b)
{
    if (intersects(a, b))
        return 0.0;
    if (a.hi() < b.lo())
        return up(rounding::add(b.lo(), -a.hi()));
    return up(rounding::add(a.lo(), -b.hi()));
}

Interval widen(const Interval& a, double r)
{
    return Interval(down(rounding::add(a.lo(), -r)), up(rounding::add(a.hi(), r)));
}

Interval abs(const Interval& a)
{
    if (a.lo() >= 0.0)
        return a;
    if (a.hi() <= 0.0)
        return -a;
    return Interval(0.0, std::max(-a.lo(), a.hi()));
}

Interval pow(const Interval& a, unsigned n)
{
    return pow_tracked(a, n).value;
}

Interval min(const Interval& a, const Interval& b)
{
    return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b)
{
    return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval floor(const Interval& a)
{
    return Interval(std::floor(a.lo()), std::floor(a.hi()));
}

Interval sqrt(const Interval& a)
{
    if (a.lo() < 0.0)
        throw DomainError("sqrt of an interval reaching below zero");
    return Interval(down(rounding::sqrt(a.lo())), up(rounding::sqrt(a.hi())));
}

namespace {

// libm results are trusted to within one ulp; two are allowed.
double libm_down(double v) { return next_down(next_down(v)); }
double libm_up(double v) { return next_up(next_up(v)); }

double checked(double v)
{
    if (!std::isfinite(v))
        throw IntervalOverflow();
    return v;
}

} // namespace

Interval exp(const Interval& a)
{
    const auto lo_of = [](double x) {
        return x == 0.0 ? 1.0 : std::max(0.0, libm_down(checked(std::exp(x))));
    };
    const auto hi_of = [](double x) { return x == 0.0 ? 1.0 : libm_up(checked(std::exp(x))); };
    return Interval(lo_of(a.lo()), hi_of(a.hi()));
}

Interval log(const Interval& a)
{
    if (a.lo() <= 0.0)
        throw DomainError("ln of an interval reaching zero or below");
    const auto lo_of = [](double x) { return x == 1.0 ? 0.0 : libm_down(std::log(x)); };
    const auto hi_of = [](double x) { return x == 1.0 ? 0.0 : libm_up(std::log(x)); };
    return Interval(lo_of(a.lo()), hi_of(a.hi()));
}

Interval pi_interval()
{
    // std::numbers::pi is the double just below pi.
    return Interval(std::numbers::pi, next_up(std::numbers::pi));
}

namespace {

// Could [a.lo(), a.hi()] contain a point offset + 2k*pi for some integer k?
bool may_contain_periodic_point(const Interval& a, const Interval& offset)
{
    static const Interval inv_two_pi = Interval(1.0) / scale(pi_interval(), 2.0);
    const Interval tlo = (Interval(a.lo()) - offset) * inv_two_pi;
    const Interval thi = (Interval(a.hi()) - offset) * inv_two_pi;
    return std::ceil(tlo.lo()) <= std::floor(thi.hi());
}

Interval trig_range(const Interval& a, double (*fn)(double), const Interval& max_at,
                    const Interval& min_at)
{
    if (width(a) >= 6.5)
        return Interval(-1.0, 1.0);
    // fn(0) is exact, so zero endpoints need no widening.
    const auto lo_of = [&](double x) { return x == 0.0 ? fn(x) : libm_down(fn(x)); };
    const auto hi_of = [&](double x) { return x == 0.0 ? fn(x) : libm_up(fn(x)); };
    double lo = std::min(lo_of(a.lo()), lo_of(a.hi()));
    double hi = std::max(hi_of(a.lo()), hi_of(a.hi()));
    if (may_contain_periodic_point(a, max_at))
        hi = 1.0;
    if (may_contain_periodic_point(a, min_at))
        lo = -1.0;
    return Interval(std::clamp(lo, -1.0, 1.0), std::clamp(hi, -1.0, 1.0));
}

} // namespace

Interval sin(const Interval& a)
{
    if (a == Interval(0.0))
        return a;
    const Interval half_pi = scale(pi_interval(), 0.5);
    return trig_range(a, [](double x) { return std::sin(x); }, half_pi, -half_pi);
}

Interval cos(const Interval& a)
{
    if (a == Interval(0.0))
        return Interval(1.0);
    return trig_range(a, [](double x) { return std::cos(x); }, Interval(0.0), pi_interval());
}

} // namespace darboux
