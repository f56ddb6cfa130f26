#include "darboux/ftc.hpp"

#include <algorithm>
#include <cmath>

#include "darboux/parallel.hpp"

namespace darboux {

FtcCertificate ftc_check(const FuncExpr& f, const PrePrimitiveFn& F, double a, double b, double tol,
                         std::size_t max_rounds)
{
    if (!(tol > 0.0))
        throw NonPositiveTolerance();
    if (a > b || !std::isfinite(a) || !std::isfinite(b))
        throw InvalidInterval("ftc check needs a <= b");

    FtcCertificate cert;
    cert.a = a;
    cert.b = b;
    if (a == b) {
        cert.verdict = FtcVerdict::Certified;
        cert.integral_enclosure = Interval(0.0);
        cert.evaluation = Interval(0.0);
        cert.integrability = VerdictKind::Integrable;
        return cert;
    }

    const Interval fa = F(a);
    const Interval fb = F(b);
    cert.evaluation = fb - fa;
    const double eval_slack = 2.0 * rounding::step(std::max(mag(fa), mag(fb)));

    const auto observe = [&](const CertifyProgress& p) {
        ++cert.partitions_checked;
        const double scale = std::max({mag(p.lower), mag(p.upper), mag(cert.evaluation)});
        const double slack = 2.0 * static_cast<double>(p.partition_size) * rounding::step(scale) + eval_slack;
        cert.slack = std::max(cert.slack, slack);
        const bool below = cert.evaluation.hi() + slack < p.lower.lo();
        const bool above = cert.evaluation.lo() - slack > p.upper.hi();
        if ((below || above) && cert.sandwich_held) {
            cert.sandwich_held = false;
            cert.violation = SandwichViolation{p.round, p.lower, p.upper};
        }
    };
    cert.refinement = certify(f, a, b, tol, max_rounds, observe);
    cert.integrability = cert.refinement.kind;
    cert.integral_enclosure = cert.refinement.enclosure;
    cert.slack = std::max(cert.slack, cert.refinement.slack + eval_slack);

    if (!cert.sandwich_held) {
        cert.verdict = FtcVerdict::Refuted;
    } else if (cert.integrability == VerdictKind::Integrable) {
        const Interval allowed = widen(cert.integral_enclosure, cert.slack);
        if (contains(allowed, cert.evaluation))
            cert.verdict = FtcVerdict::Certified;
        else if (!intersects(allowed, cert.evaluation))
            cert.verdict = FtcVerdict::Refuted;
        else
            cert.verdict = FtcVerdict::Inconclusive;
    } else {
        cert.verdict = FtcVerdict::Inconclusive;
    }
    return cert;
}

std::vector<IntegralPoint> integral_function(const FuncExpr& f, double c, std::span<const double> xs,
                                             PrePrimitiveOptions options, double tol)
{
    if (!(tol > 0.0))
        throw NonPositiveTolerance();
    if (options.target_width <= 0.0)
        options.target_width = tol;
    const PrePrimitiveFn lower = PrePrimitiveFn::lower(f, c, options);
    const PrePrimitiveFn upper = PrePrimitiveFn::upper(f, c, options);
    std::vector<IntegralPoint> table(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        const double x = xs[i];
        const Interval lo = lower(x);
        const Interval hi = upper(x);
        const Interval both = hull(lo, hi);
        table[i] = {x, lo, hi, both, width(both) <= tol ? VerdictKind::Integrable : VerdictKind::Inconclusive};
    });
    return table;
}

PrePrimitiveReport check_tabulation_lipschitz(const FuncExpr& f, double c,
                                              std::span<const IntegralPoint> table)
{
    PrePrimitiveReport rep;
    rep.property = Property::Lipschitz;
    if (table.empty())
        return rep;
    double lo = c;
    double hi = c;
    for (const auto& p : table) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }
    const double L = mag(range_on(f, Interval(lo, hi)).range);
    rep.lipschitz_constant = L;

    std::vector<const IntegralPoint*> sorted;
    for (const auto& p : table)
        sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](auto* l, auto* r) { return l->x < r->x; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const IntegralPoint& p = *sorted[i - 1];
        const IntegralPoint& q = *sorted[i];
        if (p.x == q.x)
            continue;
        const Interval change = q.enclosure - p.enclosure;
        const double least = contains(change, 0.0) ? 0.0
                                                   : std::min(std::fabs(change.lo()), std::fabs(change.hi()));
        const double dx = rounding::up(rounding::add(q.x, -p.x));
        const double slack = 4.0 * rounding::step(std::max(mag(p.enclosure), mag(q.enclosure)));
        rep.slack = std::max(rep.slack, slack);
        if (least > rounding::up(rounding::mul(L, dx)) + slack) {
            ++rep.violations;
            if (rep.witnesses.size() < kMaxWitnesses)
                rep.witnesses.push_back({p.x, q.x, change, Interval(-L, L)});
        }
        ++rep.samples_checked;
    }
    rep.verdict = rep.violations ? CheckVerdict::Refuted : CheckVerdict::ConsistentAtResolution;
    return rep;
}

std::string to_string(FtcVerdict v)
{
    switch (v) {
    case FtcVerdict::Certified: return "certified";
    case FtcVerdict::Refuted: return "refuted";
    case FtcVerdict::Inconclusive: return "inconclusive";
    }
    return {};
}

} // namespace darboux
