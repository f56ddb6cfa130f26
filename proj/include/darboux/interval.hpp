#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "darboux/error.hpp"

namespace darboux {

// Error-free rounding primitives. Every result carries the sign of
// (true value - computed value) so callers round outward only when the
// operation was actually inexact.
namespace rounding {

inline constexpr int kExact = 0;
inline constexpr int kBelow = -1;  // true value < computed value
inline constexpr int kAbove = 1;   // true value > computed value
inline constexpr int kUnknown = 2; // residual not recoverable (underflow range)

struct Rounded {
    double value;
    int error;

    bool exact() const noexcept { return error == kExact; }
};

// Neighbouring doubles; finite inputs only (infinities and NaN pass through).
inline double next_up(double x) noexcept
{
    if (!std::isfinite(x) || x == std::numeric_limits<double>::max())
        return std::nextafter(x, std::numeric_limits<double>::infinity());
    if (x == 0.0)
        return std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits = x > 0.0 ? bits + 1 : bits - 1;
    return std::bit_cast<double>(bits);
}

inline double next_down(double x) noexcept
{
    return -next_up(-x);
}

Rounded add(double a, double b);
Rounded mul(double a, double b);
Rounded div(double a, double b);
Rounded sqrt(double a);

// Largest double <= the true result / smallest double >= the true result.
inline double down(Rounded r) noexcept
{
    return (r.error == kBelow || r.error == kUnknown) ? next_down(r.value) : r.value;
}

inline double up(Rounded r) noexcept
{
    return (r.error == kAbove || r.error == kUnknown) ? next_up(r.value) : r.value;
}

// One unit of rounding at magnitude |x| (at least the smallest normal).
double step(double x) noexcept;

} // namespace rounding

// Closed bounded interval [lo, hi] with finite endpoints and lo <= hi.
// All arithmetic rounds outward: results contain the exact result set.
class Interval {
public:
    constexpr Interval() noexcept = default;
    Interval(double lo, double hi);
    explicit Interval(double v) : Interval(v, v) {}

    static Interval point(double v) { return Interval(v, v); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    bool is_degenerate() const noexcept { return lo_ == hi_; }
    double mid() const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

// Result of an operation together with whether any endpoint was rounded.
struct Tracked {
    Interval value;
    bool exact;
};

Tracked add_tracked(const Interval& a, const Interval& b);
Tracked sub_tracked(const Interval& a, const Interval& b);
Tracked mul_tracked(const Interval& a, const Interval& b);
Tracked div_tracked(const Interval& a, const Interval& b);
Tracked pow_tracked(const Interval& a, unsigned n);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b); // throws DivisionByZeroInterval
Interval operator-(const Interval& a);

Interval scale(const Interval& a, double k);
Interval hull(const Interval& a, const Interval& b);
double width(const Interval& a); // rounded up
double mag(const Interval& a) noexcept; // max |x| over a
bool contains(const Interval& a, double x) noexcept;
bool contains(const Interval& outer, const Interval& inner) noexcept;
bool intersects(const Interval& a, const Interval& b) noexcept;
// Distance between the sets (0 when they intersect), rounded up.
double distance(const Interval& a, const Interval& b);
Interval widen(const Interval& a, double r);

Interval abs(const Interval& a);
Interval pow(const Interval& a, unsigned n);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval floor(const Interval& a);
Interval sqrt(const Interval& a); // DomainError when lo < 0
Interval exp(const Interval& a);
Interval log(const Interval& a);  // DomainError when lo <= 0
Interval sin(const Interval& a);
Interval cos(const Interval& a);

// Tight enclosure of pi.
Interval pi_interval();

} // namespace darboux
