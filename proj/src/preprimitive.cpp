#include "darboux/preprimitive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "darboux/darboux.hpp"

namespace darboux {

struct PrePrimitiveFn::State {
    PrePrimitiveKind kind;
    FuncExpr expr;
    double basepoint = 0.0;
    PrePrimitiveOptions options;
    mutable std::mutex memo_mutex;
    mutable std::map<double, Interval> memo;

    State(PrePrimitiveKind k, FuncExpr e, double c, PrePrimitiveOptions o)
        : kind(k), expr(std::move(e)), basepoint(c), options(o)
    {
    }
};

namespace {

Interval darboux_integral(const FuncExpr& f, double lo, double hi, const PrePrimitiveOptions& opt,
                          bool lower_kind)
{
    Refiner r(f, Partition({lo, hi}));
    const auto running_width = [&] {
        return lower_kind ? rounding::up(rounding::add(r.running_ceiling(), -r.running_lower().lo()))
                          : rounding::up(rounding::add(r.running_upper().hi(), -r.running_floor()));
    };
    while (r.rounds() < opt.work_budget) {
        if (opt.target_width > 0.0 && running_width() <= opt.target_width)
            break;
        if (!r.refine())
            break;
    }
    const DarbouxSums s = r.sums();
    if (lower_kind)
        return Interval(s.lower.lo(), std::max(s.lower_integral_ceiling, s.lower.lo()));
    return Interval(std::min(s.upper_integral_floor, s.upper.hi()), s.upper.hi());
}

Interval over_width(const Interval& change, double lo, double hi)
{
    const auto d = rounding::add(hi, -lo);
    const Interval dx(rounding::down(d), rounding::up(d));
    return change / dx;
}

// F(hi) - F(lo) for lo < hi. Lower and upper integrals are additive over
// adjacent intervals, so for the Darboux kinds the increment is the integral
// over [lo, hi] itself, without the error of two enclosures based at c.
Interval increment(const PrePrimitiveFn& F, double lo, double hi)
{
    switch (F.kind()) {
    case PrePrimitiveKind::LowerDarboux:
        return darboux_integral(F.expression(), lo, hi, F.options(), true);
    case PrePrimitiveKind::UpperDarboux:
        return darboux_integral(F.expression(), lo, hi, F.options(), false);
    case PrePrimitiveKind::Symbolic:
        break;
    }
    return F(hi) - F(lo);
}

void add_witness(PrePrimitiveReport& rep, Witness w)
{
    ++rep.violations;
    if (rep.witnesses.size() < kMaxWitnesses)
        rep.witnesses.push_back(w);
}

double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

} // namespace

PrePrimitiveFn::PrePrimitiveFn(std::shared_ptr<State> state) : state_(std::move(state)) {}

PrePrimitiveFn PrePrimitiveFn::lower(FuncExpr f, double c, PrePrimitiveOptions options)
{
    return PrePrimitiveFn(std::make_shared<State>(PrePrimitiveKind::LowerDarboux, std::move(f), c, options));
}

PrePrimitiveFn PrePrimitiveFn::upper(FuncExpr f, double c, PrePrimitiveOptions options)
{
    return PrePrimitiveFn(std::make_shared<State>(PrePrimitiveKind::UpperDarboux, std::move(f), c, options));
}

PrePrimitiveFn PrePrimitiveFn::symbolic(FuncExpr primitive)
{
    return PrePrimitiveFn(std::make_shared<State>(PrePrimitiveKind::Symbolic, std::move(primitive), 0.0,
                                                  PrePrimitiveOptions{}));
}

PrePrimitiveKind PrePrimitiveFn::kind() const noexcept { return state_->kind; }
double PrePrimitiveFn::basepoint() const noexcept { return state_->basepoint; }
const PrePrimitiveOptions& PrePrimitiveFn::options() const noexcept { return state_->options; }
const FuncExpr& PrePrimitiveFn::expression() const noexcept { return state_->expr; }

std::string PrePrimitiveFn::describe() const
{
    switch (state_->kind) {
    case PrePrimitiveKind::Symbolic:
        return state_->expr.to_string();
    case PrePrimitiveKind::LowerDarboux:
        return "lower integral of " + state_->expr.to_string();
    case PrePrimitiveKind::UpperDarboux:
        return "upper integral of " + state_->expr.to_string();
    }
    return {};
}

Interval PrePrimitiveFn::operator()(double x) const
{
    const State& s = *state_;
    if (s.kind == PrePrimitiveKind::Symbolic)
        return range_on(s.expr, Interval(x)).range;
    if (x == s.basepoint)
        return Interval(0.0);
    {
        std::lock_guard lock(s.memo_mutex);
        if (auto it = s.memo.find(x); it != s.memo.end())
            return it->second;
    }
    const bool lower_kind = s.kind == PrePrimitiveKind::LowerDarboux;
    Interval v = x > s.basepoint ? darboux_integral(s.expr, s.basepoint, x, s.options, lower_kind)
                                 : -darboux_integral(s.expr, x, s.basepoint, s.options, lower_kind);
    std::lock_guard lock(s.memo_mutex);
    s.memo.emplace(x, v);
    return v;
}

Interval difference_quotient(const PrePrimitiveFn& F, double x, double y)
{
    if (x == y)
        throw InvalidInterval("difference quotient needs x != y");
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return over_width(increment(F, lo, hi), lo, hi);
}

PrePrimitiveFn build_lower_preprimitive(const FuncExpr& f, double c, PrePrimitiveOptions options)
{
    return PrePrimitiveFn::lower(f, c, options);
}

PrePrimitiveFn build_upper_preprimitive(const FuncExpr& f, double c, PrePrimitiveOptions options)
{
    return PrePrimitiveFn::upper(f, c, options);
}

std::vector<std::pair<double, double>> sample_pairs(double a, double b, const PairOptions& options)
{
    if (!(a < b))
        throw InvalidInterval("pair sampling needs a < b");
    constexpr double kNear = 1e-9;
    std::vector<std::pair<double, double>> pairs;
    const auto push = [&](double x, double y) {
        x = std::clamp(x, a, b);
        y = std::clamp(y, a, b);
        if (x != y)
            pairs.emplace_back(x, y);
    };
    push(a, b);
    push(a, a + kNear);
    push(b - kNear, b);
    const double mid = std::midpoint(a, b);
    push(mid, mid + kNear);
    for (double d : options.discontinuities) {
        if (!(a <= d && d <= b))
            continue;
        push(d - kNear, d + kNear);
        push(d - kNear, d);
        push(d, d + kNear);
        push(d - 1e-3, d + 1e-3);
    }
    if (pairs.size() > options.pairs)
        pairs.resize(options.pairs);

    std::mt19937_64 rng(options.seed);
    while (pairs.size() < options.pairs) {
        const double x = a + (b - a) * unit_uniform(rng);
        const double y = a + (b - a) * unit_uniform(rng);
        push(x, y);
    }
    return pairs;
}

PrePrimitiveReport check_sandwich(const PrePrimitiveFn& F, const FuncExpr& f, double a, double b,
                                  const PairOptions& options)
{
    PrePrimitiveReport rep;
    rep.property = Property::SandwichDefA;
    for (const auto& [x, y] : sample_pairs(a, b, options)) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        const Interval q = over_width(increment(F, lo, hi), lo, hi);
        const Interval bound = range_on(f, Interval(lo, hi)).range;
        const double slack = rounding::step(mag(bound));
        rep.slack = std::max(rep.slack, slack);
        if (!intersects(q, widen(bound, slack)))
            add_witness(rep, {x, y, q, bound});
        ++rep.samples_checked;
    }
    rep.verdict = rep.violations ? CheckVerdict::Refuted : CheckVerdict::ConsistentAtResolution;
    return rep;
}

PrePrimitiveReport check_lipschitz(const PrePrimitiveFn& F, const FuncExpr& f, double a, double b,
                                   const PairOptions& options)
{
    PrePrimitiveReport rep;
    rep.property = Property::Lipschitz;
    const double L = mag(range_on(f, Interval(a, b)).range);
    rep.lipschitz_constant = L;
    for (const auto& [x, y] : sample_pairs(a, b, options)) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        const Interval change = increment(F, lo, hi);
        const double least_change = distance(change, Interval(0.0)) == 0.0
                                        ? 0.0
                                        : std::min(std::fabs(change.lo()), std::fabs(change.hi()));
        const double dx = rounding::up(rounding::add(hi, -lo));
        const double slack = 4.0 * rounding::step(mag(change));
        rep.slack = std::max(rep.slack, slack);
        const double allowed = rounding::up(rounding::mul(L, dx)) + slack;
        if (least_change > allowed)
            add_witness(rep, {x, y, over_width(change, lo, hi), Interval(-L, L)});
        ++rep.samples_checked;
    }
    rep.verdict = rep.violations ? CheckVerdict::Refuted : CheckVerdict::ConsistentAtResolution;
    return rep;
}

std::vector<double> default_h_schedule()
{
    std::vector<double> hs;
    for (int k = 4; k <= 20; ++k)
        hs.push_back(std::ldexp(1.0, -k));
    return hs;
}

PrePrimitiveReport check_one_sided_derivative(const PrePrimitiveFn& F, const FuncExpr& f, double x,
                                              Side side, std::span<const double> h_schedule, double tol)
{
    if (!(tol > 0.0))
        throw NonPositiveTolerance();
    PrePrimitiveReport rep;
    rep.property = Property::OneSidedDerivative;
    std::vector<Interval> quotients;
    for (double h : h_schedule) {
        if (!(h > 0.0))
            throw InvalidInterval("step sizes must be positive");
        const double other = side == Side::Right ? x + h : x - h;
        const double lo = std::min(x, other);
        const double hi = std::max(x, other);
        const Interval q = over_width(increment(F, lo, hi), lo, hi);
        quotients.push_back(q);
        ++rep.samples_checked;
        if (quotients.size() < 3)
            continue;
        const std::size_t n = quotients.size();
        const Interval recent = hull(hull(quotients[n - 3], quotients[n - 2]), quotients[n - 1]);
        if (width(recent) > tol)
            continue;

        const Interval side_cell = side == Side::Right ? Interval(rounding::next_up(x), hi)
                                                       : Interval(lo, rounding::next_down(x));
        const Interval target = range_on(f, side_cell).range;
        rep.estimate = recent;
        rep.target = target;
        rep.stabilized_at = h;
        rep.slack = rounding::step(std::max(mag(recent), mag(target)));
        if (distance(recent, target) > tol + rep.slack) {
            add_witness(rep, {x, other, recent, target});
            rep.verdict = CheckVerdict::Refuted;
        } else {
            rep.verdict = CheckVerdict::ConsistentAtResolution;
        }
        return rep;
    }
    rep.verdict = CheckVerdict::Inconclusive;
    if (!quotients.empty())
        rep.estimate = quotients.back();
    return rep;
}

PrePrimitiveReport check_constant_difference(const PrePrimitiveFn& F, const PrePrimitiveFn& G, double a,
                                             double b, std::size_t grid, double tol)
{
    if (!(a < b))
        throw InvalidInterval("constant-difference check needs a < b");
    if (grid < 2)
        throw InvalidPartition("constant-difference grid needs at least two points");
    if (!(tol > 0.0))
        throw NonPositiveTolerance();
    PrePrimitiveReport rep;
    rep.property = Property::ConstantDifference;

    const Partition p = Partition::uniform(a, b, grid - 1);
    std::vector<Interval> diffs;
    for (double x : p.points())
        diffs.push_back(F(x) - G(x));
    rep.samples_checked = diffs.size();

    std::size_t i_max_lo = 0;
    std::size_t i_min_hi = 0;
    Interval all = diffs.front();
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        all = hull(all, diffs[i]);
        if (diffs[i].lo() > diffs[i_max_lo].lo())
            i_max_lo = i;
        if (diffs[i].hi() < diffs[i_min_hi].hi())
            i_min_hi = i;
    }
    rep.hull_width = width(all);
    rep.separation = std::max(0.0, rounding::down(rounding::add(diffs[i_max_lo].lo(), -diffs[i_min_hi].hi())));
    rep.slack = 2.0 * rounding::step(mag(all));
    if (rep.separation > tol + rep.slack) {
        const auto pts = p.points();
        add_witness(rep, {pts[i_min_hi], pts[i_max_lo], diffs[i_min_hi], diffs[i_max_lo]});
        rep.verdict = CheckVerdict::Refuted;
    } else if (rep.hull_width > tol + rep.slack) {
        rep.verdict = CheckVerdict::Inconclusive;
    }
    return rep;
}

std::string to_string(Property p)
{
    switch (p) {
    case Property::SandwichDefA: return "sandwich";
    case Property::Lipschitz: return "lipschitz";
    case Property::OneSidedDerivative: return "one_sided_derivative";
    case Property::ConstantDifference: return "constant_difference";
    }
    return {};
}

std::string to_string(CheckVerdict v)
{
    switch (v) {
    case CheckVerdict::ConsistentAtResolution: return "consistent";
    case CheckVerdict::Refuted: return "refuted";
    case CheckVerdict::Inconclusive: return "inconclusive";
    }
    return {};
}

} // namespace darboux
