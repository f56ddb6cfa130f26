#include "darboux/cantor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace darboux::cantor {

namespace {

__extension__ typedef unsigned __int128 u128;

struct Scaled {
    std::uint64_t floor; // floor(x * 3^k)
    bool exact;          // x * 3^k is an integer
};

// x in [0, 1].
Scaled scale_by_pow3(double x, int k)
{
    if (x == 0.0)
        return {0, true};
    int e = 0;
    const double f = std::frexp(x, &e); // x = f * 2^e, f in [0.5, 1)
    const auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
    const int s = 53 - e; // x = m / 2^s
    const u128 prod = static_cast<u128>(m) * pow3(k);
    if (s <= 0)
        return {static_cast<std::uint64_t>(prod << -s), true};
    if (s >= 128)
        return {0, prod == 0};
    const u128 mask = (static_cast<u128>(1) << s) - 1;
    return {static_cast<std::uint64_t>(prod >> s), (prod & mask) == 0};
}

} // namespace

std::uint64_t pow3(int k)
{
    std::uint64_t p = 1;
    for (int i = 0; i < k; ++i)
        p *= 3;
    return p;
}

std::optional<std::uint64_t> next_cover_index(std::uint64_t m, int depth)
{
    if (m >= pow3(depth))
        return std::nullopt;
    std::array<int, 64> digits{};
    std::uint64_t v = m;
    for (int i = depth - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(v % 3);
        v /= 3;
    }
    const auto first_one = std::find(digits.begin(), digits.begin() + depth, 1);
    if (first_one != digits.begin() + depth) {
        *first_one = 2;
        std::fill(first_one + 1, digits.begin() + depth, 0);
    }
    std::uint64_t out = 0;
    for (int i = 0; i < depth; ++i)
        out = out * 3 + static_cast<std::uint64_t>(digits[static_cast<std::size_t>(i)]);
    return out;
}

CoverRelation classify(const Interval& iv, int depth)
{
    const double lo = std::max(iv.lo(), 0.0);
    const double hi = std::min(iv.hi(), 1.0);
    if (lo > hi)
        return CoverRelation::Disjoint;

    const std::uint64_t cells = pow3(depth);
    const Scaled slo = scale_by_pow3(lo, depth);
    const Scaled shi = scale_by_pow3(hi, depth);
    const std::uint64_t ceil_lo = slo.exact ? slo.floor : slo.floor + 1;

    // Cell m = [m, m+1] / 3^d meets [lo, hi] iff ceil(lo 3^d) - 1 <= m <= floor(hi 3^d).
    const std::uint64_t m_min = ceil_lo == 0 ? 0 : ceil_lo - 1;
    const std::uint64_t m_max = std::min(shi.floor, cells - 1);
    const auto first = next_cover_index(m_min, depth);
    if (m_min > m_max || !first || *first > m_max)
        return CoverRelation::Disjoint;

    // Cell m lies inside [lo, hi] iff ceil(lo 3^d) <= m <= floor(hi 3^d) - 1.
    if (shi.floor >= 1) {
        const auto inner = next_cover_index(ceil_lo, depth);
        if (inner && *inner + 1 <= shi.floor)
            return CoverRelation::ContainsCell;
    }
    return CoverRelation::Touches;
}

std::optional<bool> contains_point(double x)
{
    if (x < 0.0 || x > 1.0)
        return false;
    if (x == 0.0 || x == 1.0)
        return true;
    if (classify(Interval(x), kDepth) == CoverRelation::Disjoint)
        return false;

    // x = m / 2^s with m odd. A non-integer dyadic rational has a unique,
    // purely periodic ternary expansion: x is in C iff no digit is 1.
    int e = 0;
    const double f = std::frexp(x, &e);
    auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
    int s = 53 - e;
    while ((m & 1u) == 0) {
        m >>= 1;
        --s;
    }
    if (s > 125)
        return std::nullopt;

    const u128 mask = (static_cast<u128>(1) << s) - 1;
    const u128 start = m;
    u128 r = start;
    for (int i = 0; i < (1 << 20); ++i) {
        const u128 t = r * 3;
        if ((t >> s) == 1)
            return false;
        r = t & mask;
        if (r == start)
            return true;
    }
    return std::nullopt;
}

} // namespace darboux::cantor
