#pragma once

#include <cstdint>
#include <optional>

#include "darboux/interval.hpp"

// Middle-thirds Cantor set C and its depth-d covers C_d (2^d closed cells of
// width 3^-d). All decisions are exact for double inputs.
namespace darboux::cantor {

inline constexpr int kDepth = 40;

enum class CoverRelation {
    Disjoint,     // iv misses C_d, so it misses C
    ContainsCell, // iv contains a whole cell of C_d
    Touches,      // neither of the above
};

CoverRelation classify(const Interval& iv, int depth = kDepth);

// Exact membership of the dyadic rational x in C; nullopt when the ternary
// orbit is too long to settle.
std::optional<bool> contains_point(double x);

// Smallest m' >= m whose `depth` ternary digits are all 0 or 2, if any.
std::optional<std::uint64_t> next_cover_index(std::uint64_t m, int depth);

std::uint64_t pow3(int k);

} // namespace darboux::cantor
