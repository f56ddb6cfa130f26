#include "darboux/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "darboux/cantor.hpp"

namespace darboux {

namespace {

// ---------------------------------------------------------------------------
// Pointwise evaluation with provenance.

Rationality sum_rationality(Rationality a, Rationality b)
{
    using R = Rationality;
    if (a == R::Rational && b == R::Rational)
        return R::Rational;
    if ((a == R::Rational && b == R::Irrational) || (a == R::Irrational && b == R::Rational))
        return R::Irrational;
    return R::Unknown;
}

bool is_exact_nonzero_rational(const Point& p)
{
    return p.rationality == Rationality::Rational && p.exact && p.value != 0.0;
}

bool is_exact_zero(const Point& p)
{
    return p.exact && p.value == 0.0;
}

Rationality product_rationality(const Point& a, const Point& b)
{
    using R = Rationality;
    if (is_exact_zero(a) || is_exact_zero(b))
        return R::Rational;
    if (a.rationality == R::Rational && b.rationality == R::Rational)
        return R::Rational;
    if ((is_exact_nonzero_rational(a) && b.rationality == R::Irrational) ||
        (is_exact_nonzero_rational(b) && a.rationality == R::Irrational))
        return R::Irrational;
    return R::Unknown;
}

double finite(double v)
{
    if (!std::isfinite(v))
        throw DomainError("evaluation overflow");
    return v;
}

Point eval(const Node& n, const Point& x)
{
    using R = Rationality;
    const auto arg = [&](std::size_t i) { return eval(*n.args[i], x); };
    switch (n.kind) {
    case NodeKind::Const:
        return Point::literal(n.value);
    case NodeKind::Var:
        return x;
    case NodeKind::Pi:
        return {std::numbers::pi, R::Irrational, false};
    case NodeKind::Neg: {
        Point a = arg(0);
        a.value = -a.value;
        return a;
    }
    case NodeKind::Add:
    case NodeKind::Sub: {
        const Point a = arg(0);
        const Point b = arg(1);
        const double bv = n.kind == NodeKind::Add ? b.value : -b.value;
        const auto r = rounding::add(a.value, bv);
        return {r.value, sum_rationality(a.rationality, b.rationality), a.exact && b.exact && r.exact()};
    }
    case NodeKind::Mul: {
        const Point a = arg(0);
        const Point b = arg(1);
        const auto r = rounding::mul(a.value, b.value);
        const bool exact = (is_exact_zero(a) || is_exact_zero(b)) || (a.exact && b.exact && r.exact());
        return {r.value, product_rationality(a, b), exact};
    }
    case NodeKind::Div: {
        const Point a = arg(0);
        const Point b = arg(1);
        if (b.value == 0.0)
            throw DomainError("division by zero");
        const auto r = rounding::div(a.value, b.value);
        R rat = R::Unknown;
        if (is_exact_zero(a))
            rat = R::Rational;
        else if (a.rationality == R::Rational && b.rationality == R::Rational)
            rat = R::Rational;
        else if ((is_exact_nonzero_rational(a) && b.rationality == R::Irrational) ||
                 (is_exact_nonzero_rational(b) && a.rationality == R::Irrational))
            rat = R::Irrational;
        return {r.value, rat, is_exact_zero(a) || (a.exact && b.exact && r.exact())};
    }
    case NodeKind::Pow: {
        const Point a = arg(0);
        if (n.exponent == 0)
            return Point::literal(1.0);
        double v = 1.0;
        bool exact = a.exact;
        for (unsigned i = 0; i < n.exponent; ++i) {
            const auto r = rounding::mul(v, a.value);
            exact = exact && r.exact();
            v = finite(r.value);
        }
        const R rat = a.rationality == R::Rational || n.exponent == 1 ? a.rationality : R::Unknown;
        return {v, rat, exact};
    }
    case NodeKind::Abs: {
        Point a = arg(0);
        a.value = std::fabs(a.value);
        return a;
    }
    case NodeKind::Min:
    case NodeKind::Max: {
        const Point a = arg(0);
        const Point b = arg(1);
        const bool take_a = n.kind == NodeKind::Min ? a.value <= b.value : a.value >= b.value;
        Point r = take_a ? a : b;
        // Close values may be ordered differently in exact arithmetic.
        if (!(a.exact && b.exact) && a.rationality != b.rationality)
            r.rationality = R::Unknown;
        r.exact = r.exact && a.exact && b.exact;
        return r;
    }
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Ln:
    case NodeKind::Sqrt: {
        const Point a = arg(0);
        const bool zero = is_exact_zero(a);
        switch (n.kind) {
        case NodeKind::Sin:
            return zero ? Point::literal(0.0) : Point{std::sin(a.value), R::Unknown, false};
        case NodeKind::Cos:
            return zero ? Point::literal(1.0) : Point{std::cos(a.value), R::Unknown, false};
        case NodeKind::Exp:
            return zero ? Point::literal(1.0) : Point{finite(std::exp(a.value)), R::Unknown, false};
        case NodeKind::Ln:
            if (a.value <= 0.0)
                throw DomainError("ln of a nonpositive number");
            if (a.exact && a.value == 1.0)
                return Point::literal(0.0);
            return {std::log(a.value), R::Unknown, false};
        default: {
            if (a.value < 0.0)
                throw DomainError("sqrt of a negative number");
            const auto r = rounding::sqrt(a.value);
            if (a.exact && r.exact())
                return Point::literal(r.value);
            return {r.value, R::Unknown, false};
        }
        }
    }
    case NodeKind::Floor: {
        const Point a = arg(0);
        return {std::floor(a.value), R::Rational, a.exact};
    }
    case NodeKind::Sign: {
        const Point a = arg(0);
        const double s = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
        return {s, R::Rational, a.exact};
    }
    case NodeKind::Step: {
        const Point a = arg(0);
        return {a.value < n.threshold ? n.below : n.above, R::Rational, a.exact};
    }
    case NodeKind::Dirichlet: {
        const Point a = arg(0);
        if (a.rationality == R::Unknown)
            throw EvalUndecidable("dirichlet(): rationality of the argument is not known");
        return Point::literal(a.rationality == R::Rational ? 1.0 : 0.0);
    }
    case NodeKind::Cantor: {
        const Point a = arg(0);
        if (!a.exact)
            throw EvalUndecidable("cantor(): argument is not exactly representable");
        const auto in = cantor::contains_point(a.value);
        if (!in)
            throw EvalUndecidable("cantor(): membership not decidable at this argument");
        return Point::literal(*in ? 1.0 : 0.0);
    }
    }
    throw std::logic_error("unhandled node kind");
}

// ---------------------------------------------------------------------------
// Range enclosure.

struct Enc {
    Interval range;
    bool exact = false;      // endpoints are inf/sup up to outward rounding
    bool sharp = false;      // endpoints are inf/sup exactly
    bool continuous = false;
    bool single = false;     // constant on the interval
    bool nowhere_const = false; // continuous and constant on no subinterval
    Rationality rationality = Rationality::Unknown; // of the value, when single
    bool dense_inf = false;
    bool dense_sup = false;
};

Enc constant(double v)
{
    Enc e;
    e.range = Interval(v);
    e.exact = e.sharp = e.continuous = e.single = true;
    e.rationality = Rationality::Rational;
    e.dense_inf = e.dense_sup = true;
    return e;
}

bool is_scalar(const Enc& e)
{
    return e.single && e.sharp && e.range.is_degenerate();
}

bool straddles_zero(const Interval& r)
{
    return r.lo() < 0.0 && r.hi() > 0.0;
}

Point as_point(const Enc& e)
{
    return {e.range.lo(), e.rationality, e.sharp && e.range.is_degenerate()};
}

Enc combine_singles(const Enc& a, const Enc& b, const Tracked& t, Rationality rat)
{
    Enc e;
    e.range = t.value;
    e.exact = a.exact && b.exact;
    e.sharp = a.sharp && b.sharp && t.exact;
    e.continuous = e.single = true;
    e.rationality = rat;
    e.dense_inf = e.dense_sup = e.sharp;
    return e;
}

// a op k where the constant k does not change how a varies (except possibly its direction).
Enc with_constant(const Enc& varying, const Enc& k, const Tracked& t, bool flips)
{
    Enc e;
    e.range = t.value;
    e.exact = varying.exact && k.exact;
    e.sharp = varying.sharp && is_scalar(k) && t.exact;
    e.continuous = varying.continuous && k.continuous;
    e.nowhere_const = varying.nowhere_const;
    e.dense_inf = e.sharp && (flips ? varying.dense_sup : varying.dense_inf);
    e.dense_sup = e.sharp && (flips ? varying.dense_inf : varying.dense_sup);
    return e;
}

Enc two_varying(const Interval& r, const Enc& a, const Enc& b)
{
    Enc e;
    e.range = r;
    e.continuous = a.continuous && b.continuous;
    return e;
}

Enc enclose(const Node& n, const Interval& iv);

Enc enclose_sum(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    const Enc b = enclose(*n.args[1], iv);
    const bool add = n.kind == NodeKind::Add;
    const Tracked t = add ? add_tracked(a.range, b.range) : sub_tracked(a.range, b.range);
    if (a.single && b.single)
        return combine_singles(a, b, t, sum_rationality(a.rationality, b.rationality));
    if (b.single)
        return with_constant(a, b, t, false);
    if (a.single)
        return with_constant(b, a, t, !add);
    return two_varying(t.value, a, b);
}

Enc enclose_product(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    const Enc b = enclose(*n.args[1], iv);
    const Tracked t = mul_tracked(a.range, b.range);
    if (is_scalar(a) && a.range.lo() == 0.0)
        return constant(0.0);
    if (is_scalar(b) && b.range.lo() == 0.0)
        return constant(0.0);
    if (a.single && b.single)
        return combine_singles(a, b, t, product_rationality(as_point(a), as_point(b)));
    if (b.single && !contains(b.range, 0.0))
        return with_constant(a, b, t, b.range.hi() < 0.0);
    if (a.single && !contains(a.range, 0.0))
        return with_constant(b, a, t, a.range.hi() < 0.0);
    return two_varying(t.value, a, b);
}

Enc enclose_quotient(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    const Enc b = enclose(*n.args[1], iv);
    const Tracked t = div_tracked(a.range, b.range);
    if (is_scalar(a) && a.range.lo() == 0.0)
        return constant(0.0);
    if (a.single && b.single) {
        using R = Rationality;
        const Point pa = as_point(a);
        const Point pb = as_point(b);
        R rat = R::Unknown;
        if (pa.rationality == R::Rational && pb.rationality == R::Rational)
            rat = R::Rational;
        else if ((is_exact_nonzero_rational(pa) && pb.rationality == R::Irrational) ||
                 (is_exact_nonzero_rational(pb) && pa.rationality == R::Irrational))
            rat = R::Irrational;
        return combine_singles(a, b, t, rat);
    }
    if (b.single)
        return with_constant(a, b, t, b.range.hi() < 0.0);
    if (a.single && !contains(a.range, 0.0)) {
        // k / g is monotone in g because 0 is outside g's range.
        Enc e = with_constant(b, a, t, a.range.lo() > 0.0);
        e.exact = b.exact && a.exact;
        e.sharp = b.sharp && is_scalar(a) && t.exact;
        const bool flips = a.range.lo() > 0.0;
        e.dense_inf = e.sharp && (flips ? b.dense_sup : b.dense_inf);
        e.dense_sup = e.sharp && (flips ? b.dense_inf : b.dense_sup);
        return e;
    }
    return two_varying(t.value, a, b);
}

// Shared by abs and even powers: monotone on each sign, folded at zero.
Enc folded(const Enc& a, const Tracked& t, bool keeps_single)
{
    Enc e;
    e.range = t.value;
    const bool straddle = straddles_zero(a.range);
    const bool attains_zero = !straddle || a.continuous;
    e.exact = a.exact && attains_zero;
    e.sharp = a.sharp && t.exact && attains_zero;
    e.continuous = a.continuous;
    e.nowhere_const = a.nowhere_const;
    e.single = a.single && keeps_single;
    e.rationality = a.single && a.rationality == Rationality::Rational ? Rationality::Rational
                                                                       : Rationality::Unknown;
    if (e.sharp && !straddle) {
        const bool neg = a.range.hi() <= 0.0 && a.range.lo() < 0.0;
        e.dense_inf = neg ? a.dense_sup : a.dense_inf;
        e.dense_sup = neg ? a.dense_inf : a.dense_sup;
    }
    if (e.single)
        e.dense_inf = e.dense_sup = e.sharp;
    return e;
}

Enc enclose_pow(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    if (n.exponent == 0)
        return constant(1.0);
    if (n.exponent == 1)
        return a;
    const Tracked t = pow_tracked(a.range, n.exponent);
    if (n.exponent % 2 == 0)
        return folded(a, t, true);
    Enc e = a;
    e.range = t.value;
    e.sharp = a.sharp && t.exact;
    e.dense_inf = e.sharp && a.dense_inf;
    e.dense_sup = e.sharp && a.dense_sup;
    if (a.single && a.rationality != Rationality::Rational)
        e.rationality = Rationality::Unknown;
    return e;
}

Enc enclose_minmax(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    const Enc b = enclose(*n.args[1], iv);
    const bool is_min = n.kind == NodeKind::Min;
    // One argument dominates the other everywhere on iv.
    if (a.range.hi() <= b.range.lo())
        return is_min ? a : b;
    if (b.range.hi() <= a.range.lo())
        return is_min ? b : a;
    Enc e;
    e.range = is_min ? min(a.range, b.range) : max(a.range, b.range);
    e.continuous = a.continuous && b.continuous;
    if (a.single && b.single) {
        e.single = true;
        e.rationality = a.rationality == b.rationality ? a.rationality : Rationality::Unknown;
    }
    return e;
}

// Continuous, locally non-constant maps (sin, cos, exp, ln, sqrt).
Enc enclose_elementary(const Node& n, const Interval& iv)
{
    const Enc a = enclose(*n.args[0], iv);
    Enc e;
    switch (n.kind) {
    case NodeKind::Sin:
        e.range = sin(a.range);
        break;
    case NodeKind::Cos:
        e.range = cos(a.range);
        break;
    case NodeKind::Exp:
        e.range = exp(a.range);
        break;
    case NodeKind::Ln:
        e.range = log(a.range);
        break;
    default:
        e.range = sqrt(a.range);
        break;
    }
    const bool monotone = n.kind == NodeKind::Exp || n.kind == NodeKind::Ln || n.kind == NodeKind::Sqrt;
    // Interior extrema of sin/cos are only attained when the argument sweeps continuously.
    e.exact = a.exact && (monotone || a.continuous || a.single);
    e.continuous = a.continuous;
    e.nowhere_const = a.nowhere_const;
    e.single = a.single;
    if (e.single) {
        // Point results are rational only in the trivial cases handled pointwise.
        const Point p = as_point(a);
        if (p.exact) {
            Node probe = n;
            auto arg = std::make_shared<Node>();
            arg->kind = NodeKind::Const;
            arg->value = p.value;
            probe.args = {arg};
            const Point r = eval(probe, Point::literal(0.0));
            e.rationality = r.rationality;
            if (r.exact) {
                e.range = Interval(r.value);
                e.sharp = true;
                e.dense_inf = e.dense_sup = true;
            }
        }
    }
    return e;
}

// Piecewise-constant maps whose extreme branch values are lo_value, hi_value.
Enc enclose_piecewise(const Enc& a, double lo_value, double hi_value)
{
    if (lo_value == hi_value)
        return constant(lo_value);
    Enc e;
    e.range = Interval(lo_value, hi_value);
    // Both extreme branches are reached when the argument sweeps its exact hull.
    e.exact = e.sharp = a.sharp && a.continuous;
    return e;
}

Enc enclose_dirichlet(const Enc& a)
{
    using R = Rationality;
    if (a.single) {
        if (a.rationality == R::Rational)
            return constant(1.0);
        if (a.rationality == R::Irrational)
            return constant(0.0);
        Enc e;
        e.range = Interval(0.0, 1.0);
        e.single = true;
        e.continuous = true;
        e.rationality = R::Rational;
        return e;
    }
    Enc e;
    e.range = Interval(0.0, 1.0);
    if (a.nowhere_const) {
        // Every subinterval maps onto a nondegenerate interval, which holds
        // rationals and irrationals alike.
        e.exact = e.sharp = true;
        e.dense_inf = e.dense_sup = true;
    } else if (a.continuous && a.sharp && !a.range.is_degenerate()) {
        e.exact = e.sharp = true;
    }
    return e;
}

Enc enclose_cantor(const Enc& a)
{
    if (a.single && a.sharp && a.range.is_degenerate()) {
        const auto in = cantor::contains_point(a.range.lo());
        if (in)
            return constant(*in ? 1.0 : 0.0);
    }
    const auto rel = cantor::classify(a.range);
    if (rel == cantor::CoverRelation::Disjoint)
        return constant(0.0);
    Enc e;
    e.range = Interval(0.0, 1.0);
    if (a.single) {
        e.single = true;
        e.continuous = true;
        e.rationality = Rationality::Rational;
        return e;
    }
    // C has empty interior, so a nondegenerate image always leaves it.
    e.dense_inf = a.nowhere_const;
    if (rel == cantor::CoverRelation::ContainsCell && a.continuous && a.sharp)
        e.exact = e.sharp = true;
    return e;
}

Enc enclose(const Node& n, const Interval& iv)
{
    switch (n.kind) {
    case NodeKind::Const:
        return constant(n.value);
    case NodeKind::Var: {
        Enc e;
        e.range = iv;
        e.exact = e.sharp = e.continuous = true;
        e.single = iv.is_degenerate();
        e.nowhere_const = !e.single;
        e.rationality = Rationality::Rational;
        e.dense_inf = e.dense_sup = e.single;
        return e;
    }
    case NodeKind::Pi: {
        Enc e;
        e.range = pi_interval();
        e.exact = e.continuous = e.single = true;
        e.rationality = Rationality::Irrational;
        return e;
    }
    case NodeKind::Neg: {
        Enc e = enclose(*n.args[0], iv);
        e.range = -e.range;
        std::swap(e.dense_inf, e.dense_sup);
        return e;
    }
    case NodeKind::Add:
    case NodeKind::Sub:
        return enclose_sum(n, iv);
    case NodeKind::Mul:
        return enclose_product(n, iv);
    case NodeKind::Div:
        return enclose_quotient(n, iv);
    case NodeKind::Pow:
        return enclose_pow(n, iv);
    case NodeKind::Abs: {
        const Enc a = enclose(*n.args[0], iv);
        return folded(a, {abs(a.range), true}, true);
    }
    case NodeKind::Min:
    case NodeKind::Max:
        return enclose_minmax(n, iv);
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Ln:
    case NodeKind::Sqrt:
        return enclose_elementary(n, iv);
    case NodeKind::Floor: {
        const Enc a = enclose(*n.args[0], iv);
        const auto f = [](double v) { return std::floor(v); };
        return enclose_piecewise(a, f(a.range.lo()), f(a.range.hi()));
    }
    case NodeKind::Sign: {
        const Enc a = enclose(*n.args[0], iv);
        const auto s = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
        return enclose_piecewise(a, s(a.range.lo()), s(a.range.hi()));
    }
    case NodeKind::Step: {
        const Enc a = enclose(*n.args[0], iv);
        const auto s = [&](double v) { return v < n.threshold ? n.below : n.above; };
        const double at_lo = s(a.range.lo());
        const double at_hi = s(a.range.hi());
        if (at_lo == at_hi || n.below == n.above)
            return constant(at_lo);
        return enclose_piecewise(a, std::min(at_lo, at_hi), std::max(at_lo, at_hi));
    }
    case NodeKind::Dirichlet:
        return enclose_dirichlet(enclose(*n.args[0], iv));
    case NodeKind::Cantor:
        return enclose_cantor(enclose(*n.args[0], iv));
    }
    throw std::logic_error("unhandled node kind");
}

} // namespace

double eval_point(const FuncExpr& f, const Point& x)
{
    return eval(f.root(), x).value;
}

double eval_point(const FuncExpr& f, double x)
{
    return eval_point(f, Point::literal(x));
}

Point parse_point(std::string_view src)
{
    const FuncExpr e = parse(src);
    if (!e.is_constant())
        throw ParseError(0, {"constant expression"}, "point must not depend on x: " + std::string(src));
    return eval(e.root(), Point::literal(0.0));
}

RangeEnclosure range_on(const FuncExpr& f, const Interval& iv)
{
    const Enc e = enclose(f.root(), iv);
    return {e.range, e.exact, e.dense_inf, e.dense_sup};
}

} // namespace darboux
