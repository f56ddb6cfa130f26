#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "darboux/expr.hpp"
#include "darboux/interval.hpp"

namespace darboux {

enum class PrePrimitiveKind { LowerDarboux, UpperDarboux, Symbolic };

struct PrePrimitiveOptions {
    std::size_t work_budget = 4096; // refinement rounds per query
    double target_width = 0.0;      // stop a query early once its gap is this small
};

// A candidate pre-primitive F, queried as interval enclosures of F(x).
//
// The Darboux kinds integrate f from the basepoint c. The lower kind encloses
// the lower integral from c to x (negated for x < c, zero at c); the upper
// kind does the same for the upper integral. Copies share one memo table.
class PrePrimitiveFn {
public:
    static PrePrimitiveFn lower(FuncExpr f, double c, PrePrimitiveOptions options = {});
    static PrePrimitiveFn upper(FuncExpr f, double c, PrePrimitiveOptions options = {});
    static PrePrimitiveFn symbolic(FuncExpr primitive);

    Interval operator()(double x) const;

    PrePrimitiveKind kind() const noexcept;
    double basepoint() const noexcept;
    const PrePrimitiveOptions& options() const noexcept;
    // f for the Darboux kinds, the primitive itself for Symbolic.
    const FuncExpr& expression() const noexcept;
    std::string describe() const;

private:
    struct State;
    explicit PrePrimitiveFn(std::shared_ptr<State> state);
    std::shared_ptr<State> state_;
};

// Enclosure of (F(y) - F(x)) / (y - x); symmetric in x and y. For the
// Darboux kinds the numerator is the integral over [x, y] computed directly.
Interval difference_quotient(const PrePrimitiveFn& F, double x, double y);

PrePrimitiveFn build_lower_preprimitive(const FuncExpr& f, double c, PrePrimitiveOptions options = {});
PrePrimitiveFn build_upper_preprimitive(const FuncExpr& f, double c, PrePrimitiveOptions options = {});

enum class Property { SandwichDefA, Lipschitz, OneSidedDerivative, ConstantDifference };
// Passing checks never prove a property; only refutations are definitive.
enum class CheckVerdict { ConsistentAtResolution, Refuted, Inconclusive };

struct Witness {
    double x;
    double y;
    Interval quotient; // or F - G at x for constant-difference checks
    Interval bound;    // or F - G at y for constant-difference checks
};

struct PrePrimitiveReport {
    Property property = Property::SandwichDefA;
    CheckVerdict verdict = CheckVerdict::ConsistentAtResolution;
    std::vector<Witness> witnesses; // at most kMaxWitnesses are kept
    std::size_t violations = 0;
    std::size_t samples_checked = 0;
    double slack = 0.0;

    double lipschitz_constant = 0.0;      // Lipschitz
    std::optional<Interval> estimate;     // one-sided derivative: stabilized quotients
    std::optional<Interval> target;       // one-sided derivative: f on the one-sided neighbourhood
    std::optional<double> stabilized_at;  // step size where stabilization was detected
    double separation = 0.0;              // constant difference
    double hull_width = 0.0;              // constant difference
};

inline constexpr std::size_t kMaxWitnesses = 16;

struct PairOptions {
    std::size_t pairs = 1000;
    std::uint64_t seed = 0;
    // Points where f jumps; pairs straddling them are always checked.
    std::vector<double> discontinuities;
};

// Sampled pairs: the endpoints, near-coincident pairs (1e-9 apart), pairs
// straddling each discontinuity, then seeded random pairs up to options.pairs.
std::vector<std::pair<double, double>> sample_pairs(double a, double b, const PairOptions& options);

// Refuted when some difference quotient of F misses the range enclosure of f
// over the pair's interval.
PrePrimitiveReport check_sandwich(const PrePrimitiveFn& F, const FuncExpr& f, double a, double b,
                                  const PairOptions& options = {});

// |F(y) - F(x)| <= L |y - x| with L = max |f| over [a, b].
PrePrimitiveReport check_lipschitz(const PrePrimitiveFn& F, const FuncExpr& f, double a, double b,
                                   const PairOptions& options = {});

enum class Side { Right, Left };

// 2^-k for k = 4..20.
std::vector<double> default_h_schedule();

// Difference quotients over the schedule must stabilize (three consecutive
// enclosures within tol) at a value within tol of f on the one-sided
// neighbourhood of x.
PrePrimitiveReport check_one_sided_derivative(const PrePrimitiveFn& F, const FuncExpr& f, double x,
                                              Side side, std::span<const double> h_schedule,
                                              double tol = 1e-3);

// Tabulates F - G on a uniform grid of [a, b]. Refuted when two grid values
// are separated by more than tol, consistent when all of them fit in a band
// of width tol, inconclusive otherwise.
PrePrimitiveReport check_constant_difference(const PrePrimitiveFn& F, const PrePrimitiveFn& G, double a,
                                             double b, std::size_t grid, double tol);

std::string to_string(Property p);
std::string to_string(CheckVerdict v);

} // namespace darboux
