#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "darboux/darboux.hpp"
#include "darboux/expr.hpp"

namespace darboux {

enum class Integrability { Yes, No, PerAnalysis };
enum class OneSidedLimits { EverywhereRight, EverywhereLeft, Both, AnnotatedPoints };

struct KnownIntegral {
    double a;
    double b;
    Interval value;
    std::string source; // how the value was obtained
};

struct Jump {
    double x;
    double left;  // limit from the left
    double right; // limit from the right
};

struct GalleryEntry {
    std::string name;
    FuncExpr f;
    std::optional<FuncExpr> primitive; // symbolic pre-primitive of f
    Integrability integrable = Integrability::Yes;
    OneSidedLimits limits = OneSidedLimits::Both;
    std::vector<double> limit_points; // used with AnnotatedPoints
    std::vector<KnownIntegral> known_integrals;
    std::vector<double> discontinuities;
    std::vector<Jump> jumps;
    Interval domain;
    std::vector<double> continuity_points; // where derivative checks apply
};

const std::vector<GalleryEntry>& builtin_gallery();
const GalleryEntry* find_gallery_entry(std::string_view name);

// Depth of the ternary cover used for the Cantor entry's known integral.
inline constexpr int kCantorKnownDepth = 18;

// Partition of [0, 1] whose cells are the 2^depth cells of the depth-d Cantor
// cover (endpoints rounded outward) and the removed gaps between them.
Partition cantor_cover_partition(int depth);

std::string to_string(Integrability i);
std::string to_string(OneSidedLimits l);

} // namespace darboux
