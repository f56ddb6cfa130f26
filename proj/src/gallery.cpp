#include "darboux/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "darboux/cantor.hpp"

namespace darboux {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

GalleryEntry entry(std::string name, std::string_view f, std::string_view primitive)
{
    return GalleryEntry{std::move(name), parse(f), parse(primitive), Integrability::Yes, OneSidedLimits::Both,
                        {}, {}, {}, {}, Interval(), {}};
}

Interval around(double v)
{
    return Interval(rounding::next_down(v), rounding::next_up(v));
}

constexpr double kStaircaseJumps[] = {0.5,  0.3333333333333333,  0.25,  0.2, 0.16666666666666666,
                                      0.14285714285714285, 0.125, 0.1111111111111111, 0.1};

std::string staircase_text(bool primitive)
{
    std::string out;
    for (double t : kStaircaseJumps) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        if (!out.empty())
            out += " + ";
        out += primitive ? "0.125*max(x - " + std::string(buf) + ", 0)"
                         : "step(" + std::string(buf) + ", 0, 0.125)";
    }
    return out;
}

GalleryEntry staircase()
{
    GalleryEntry e = entry("staircase", staircase_text(false), staircase_text(true));
    e.limits = OneSidedLimits::Both;
    e.domain = Interval(0.0, 1.0);
    Interval total(0.0);
    for (double t : kStaircaseJumps) {
        total = total + Interval(0.125) * (Interval(1.0) - Interval(t));
        e.discontinuities.push_back(t);
    }
    std::sort(e.discontinuities.begin(), e.discontinuities.end());
    double height = 0.0;
    for (double t : e.discontinuities) {
        e.jumps.push_back({t, height, height + 0.125});
        height += 0.125;
    }
    e.known_integrals.push_back({0.0, 1.0, total, "sum of rectangle areas"});
    e.continuity_points = {0.05, 0.3, 0.75};
    return e;
}

std::vector<GalleryEntry> make_gallery()
{
    std::vector<GalleryEntry> g;

    {
        GalleryEntry e = entry("identity", "x", "x^2/2");
        e.domain = Interval(0.0, 1.0);
        e.known_integrals.push_back({0.0, 1.0, Interval(0.5), "closed form"});
        e.continuity_points = {0.25, 0.5};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("quadratic", "x^2 - x", "x^3/3 - x^2/2");
        e.domain = Interval(0.0, 1.0);
        e.known_integrals.push_back({0.0, 1.0, around(-1.0 / 6.0), "closed form"});
        e.continuity_points = {0.25, 0.5};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("cos", "cos(x)", "sin(x)");
        e.domain = Interval(0.0, kHalfPi);
        // The upper limit is the double just below pi/2.
        e.known_integrals.push_back({0.0, kHalfPi, Interval(rounding::next_down(1.0), 1.0), "closed form"});
        e.continuity_points = {0.0, 0.5, 1.0};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("exp", "exp(x)", "exp(x)");
        e.domain = Interval(0.0, 1.0);
        e.known_integrals.push_back({0.0, 1.0, around(std::numbers::e - 1.0), "closed form"});
        e.continuity_points = {0.0, 0.5};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("abs", "abs(x)", "x*abs(x)/2");
        e.domain = Interval(-1.0, 1.0);
        e.known_integrals.push_back({-1.0, 1.0, Interval(1.0), "closed form"});
        e.continuity_points = {-0.5, 0.0, 0.5};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("sign", "sign(x)", "abs(x)");
        e.domain = Interval(-1.0, 1.0);
        e.known_integrals.push_back({-1.0, 1.0, Interval(0.0), "closed form"});
        e.discontinuities = {0.0};
        e.jumps = {{0.0, -1.0, 1.0}};
        e.continuity_points = {-0.5, 0.5};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("step", "step(0.5, 0, 1)", "max(x - 0.5, 0)");
        e.domain = Interval(0.0, 1.0);
        e.known_integrals.push_back({0.0, 1.0, Interval(0.5), "closed form"});
        e.discontinuities = {0.5};
        e.jumps = {{0.5, 0.0, 1.0}};
        e.continuity_points = {0.25, 0.75};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("floor3", "floor(3*x)",
                               "max(x - 0.3333333333333333, 0) + max(x - 0.6666666666666666, 0)");
        e.domain = Interval(0.0, 1.0);
        e.known_integrals.push_back({0.0, 1.0, Interval(1.0), "piecewise area"});
        e.discontinuities = {1.0 / 3.0, 2.0 / 3.0};
        e.jumps = {{1.0 / 3.0, 0.0, 1.0}, {2.0 / 3.0, 1.0, 2.0}};
        e.continuity_points = {0.125, 0.5, 0.875};
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("dirichlet", "dirichlet(x)", "x");
        e.integrable = Integrability::No;
        e.limits = OneSidedLimits::AnnotatedPoints;
        e.domain = Interval(0.0, 1.0);
        g.push_back(std::move(e));
    }
    {
        GalleryEntry e = entry("cantor", "cantor(x)", "0");
        e.integrable = Integrability::PerAnalysis;
        e.limits = OneSidedLimits::AnnotatedPoints;
        e.limit_points = {0.5};
        e.domain = Interval(0.0, 1.0);
        const double bound = rounding::up(rounding::div(
            static_cast<double>(std::uint64_t{1} << kCantorKnownDepth),
            static_cast<double>(cantor::pow3(kCantorKnownDepth))));
        e.known_integrals.push_back({0.0, 1.0, Interval(0.0, bound), "ternary cover count"});
        e.continuity_points = {0.5};
        g.push_back(std::move(e));
    }
    g.push_back(staircase());
    return g;
}

} // namespace

const std::vector<GalleryEntry>& builtin_gallery()
{
    static const std::vector<GalleryEntry> gallery = make_gallery();
    return gallery;
}

const GalleryEntry* find_gallery_entry(std::string_view name)
{
    for (const auto& e : builtin_gallery())
        if (e.name == name)
            return &e;
    return nullptr;
}

Partition cantor_cover_partition(int depth)
{
    if (depth < 0 || depth > cantor::kDepth)
        throw InvalidPartition("cover depth out of range");
    const double cells = static_cast<double>(cantor::pow3(depth));
    std::vector<double> pts{0.0};
    const std::uint64_t count = std::uint64_t{1} << depth;
    for (std::uint64_t i = 0; i < count; ++i) {
        // The i-th cover cell has ternary index with digits 2*bit(i).
        std::uint64_t index = 0;
        for (int d = depth - 1; d >= 0; --d)
            index = index * 3 + 2 * ((i >> d) & 1u);
        const double lo = rounding::down(rounding::div(static_cast<double>(index), cells));
        const double hi = rounding::up(rounding::div(static_cast<double>(index + 1), cells));
        if (lo > pts.back())
            pts.push_back(lo);
        pts.push_back(std::min(hi, 1.0));
    }
    if (pts.back() < 1.0)
        pts.push_back(1.0);
    return Partition(std::move(pts));
}

std::string to_string(Integrability i)
{
    switch (i) {
    case Integrability::Yes: return "yes";
    case Integrability::No: return "no";
    case Integrability::PerAnalysis: return "per_analysis";
    }
    return {};
}

std::string to_string(OneSidedLimits l)
{
    switch (l) {
    case OneSidedLimits::EverywhereRight: return "everywhere_right";
    case OneSidedLimits::EverywhereLeft: return "everywhere_left";
    case OneSidedLimits::Both: return "both";
    case OneSidedLimits::AnnotatedPoints: return "annotated_points";
    }
    return {};
}

} // namespace darboux
