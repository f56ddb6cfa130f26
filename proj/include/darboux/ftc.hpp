#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "darboux/darboux.hpp"
#include "darboux/expr.hpp"
#include "darboux/preprimitive.hpp"

namespace darboux {

enum class FtcVerdict { Certified, Refuted, Inconclusive };

// A partition on which F(b) - F(a) fell outside [lower sum, upper sum].
struct SandwichViolation {
    std::size_t round;
    Interval lower;
    Interval upper;
};

struct FtcCertificate {
    FtcVerdict verdict = FtcVerdict::Inconclusive;
    double a = 0.0;
    double b = 0.0;
    Interval integral_enclosure; // [lower sum, upper sum] of the final partition
    Interval evaluation;         // F(b) - F(a)
    VerdictKind integrability = VerdictKind::Inconclusive;
    bool sandwich_held = true;   // on every partition produced during refinement
    std::optional<SandwichViolation> violation;
    std::size_t partitions_checked = 0;
    double slack = 0.0;
    IntegrabilityVerdict refinement;
};

// Refines [a, b] as certify() does and checks lower sum <= F(b) - F(a) <=
// upper sum on every intermediate partition. Certified when f is certified
// integrable and the evaluation lies inside the integral enclosure; a = b is
// Certified with both enclosures [0, 0].
FtcCertificate ftc_check(const FuncExpr& f, const PrePrimitiveFn& F, double a, double b, double tol,
                         std::size_t max_rounds);

struct IntegralPoint {
    double x;
    Interval lower;     // lower integral from c to x
    Interval upper;     // upper integral from c to x
    Interval enclosure; // hull of both
    // Integrable when the hull is no wider than tol, Inconclusive otherwise.
    VerdictKind verdict;
};

// Tabulates the integral function x -> integral of f from c to x.
std::vector<IntegralPoint> integral_function(const FuncExpr& f, double c, std::span<const double> xs,
                                             PrePrimitiveOptions options, double tol);

// Consecutive tabulated values must satisfy |F(y) - F(x)| <= L |y - x| with
// L = max |f| over the tabulated range.
PrePrimitiveReport check_tabulation_lipschitz(const FuncExpr& f, double c,
                                              std::span<const IntegralPoint> table);

std::string to_string(FtcVerdict v);

} // namespace darboux
