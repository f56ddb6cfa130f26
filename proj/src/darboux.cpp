#include "darboux/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include "darboux/parallel.hpp"

namespace darboux {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

Interval width_enclosure(double lo, double hi)
{
    const auto d = rounding::add(hi, -lo);
    return Interval(rounding::down(d), rounding::up(d));
}

double contribution(const RangeEnclosure& e, double lo, double hi)
{
    const double spread = width(e.range);
    if (spread == 0.0)
        return 0.0;
    return rounding::up(rounding::mul(spread, width_enclosure(lo, hi).hi()));
}

bool splittable(double lo, double hi)
{
    const double m = std::midpoint(lo, hi);
    return lo < m && m < hi;
}

struct Accumulator {
    Interval lower;
    Interval upper;
    Interval ceiling;
    Interval floor;
    double magnitude = 0.0; // sum of max(|p|, |q|) * width, for the slack
    std::size_t cells = 0;

    void add(const RangeEnclosure& e, const Interval& w)
    {
        const Interval p(e.range.lo());
        const Interval q(e.range.hi());
        lower = lower + p * w;
        upper = upper + q * w;
        ceiling = ceiling + (e.dense_inf ? p : q) * w;
        floor = floor + (e.dense_sup ? q : p) * w;
        magnitude += mag(e.range) * w.hi();
        ++cells;
    }

    DarbouxSums finish() const
    {
        DarbouxSums s;
        s.lower = lower;
        s.upper = upper;
        s.lower_integral_ceiling = ceiling.hi();
        s.upper_integral_floor = floor.lo();
        const double scale = std::max({mag(lower), mag(upper), magnitude, 1e-300});
        s.slack = 2.0 * static_cast<double>(cells) * rounding::step(scale);
        return s;
    }
};

} // namespace

Partition::Partition(std::vector<double> points) : points_(std::move(points))
{
    if (points_.size() < 2)
        throw InvalidPartition("a partition needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]))
            throw InvalidPartition("partition points must be finite");
        if (i > 0 && !(points_[i - 1] < points_[i]))
            throw InvalidPartition("partition points must be strictly increasing");
    }
}

Partition Partition::uniform(double a, double b, std::size_t cells)
{
    if (cells == 0)
        throw InvalidPartition("a partition needs at least one cell");
    std::vector<double> pts(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(cells);
        pts[i] = i == cells ? b : a + (b - a) * t;
    }
    return Partition(std::move(pts));
}

DarbouxSums darboux_sums(const FuncExpr& f, const Partition& p)
{
    std::vector<CellRecord> cells(p.cells());
    parallel_for(p.cells(), [&](std::size_t i) {
        const Interval c = p.cell(i);
        cells[i] = {c, width_enclosure(c.lo(), c.hi()), range_on(f, c)};
    });
    Accumulator acc;
    for (const auto& c : cells)
        acc.add(c.bounds, c.width);
    DarbouxSums s = acc.finish();
    s.cells = std::move(cells);
    return s;
}

Interval lower_sum(const FuncExpr& f, const Partition& p)
{
    return darboux_sums(f, p).lower;
}

Interval upper_sum(const FuncExpr& f, const Partition& p)
{
    return darboux_sums(f, p).upper;
}

Partition refine_once(const FuncExpr& f, const Partition& p)
{
    const DarbouxSums s = darboux_sums(f, p);
    std::size_t best = npos;
    double best_contribution = 0.0;
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
        const Interval& c = s.cells[i].cell;
        const double k = contribution(s.cells[i].bounds, c.lo(), c.hi());
        if (splittable(c.lo(), c.hi()) && (best == npos || k > best_contribution)) {
            best = i;
            best_contribution = k;
        }
    }
    if (best == npos)
        return p;
    std::vector<double> pts(p.points().begin(), p.points().end());
    const Interval c = p.cell(best);
    pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(best) + 1, std::midpoint(c.lo(), c.hi()));
    return Partition(std::move(pts));
}

// ---------------------------------------------------------------------------

Refiner::Refiner(FuncExpr f, const Partition& seed) : f_(std::move(f))
{
    const auto pts = seed.points();
    cells_.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const std::size_t next = i + 2 < pts.size() ? i + 1 : npos;
        cells_.push_back(make_cell(pts[i], pts[i + 1], 0, next));
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        account(cells_[i], +1);
        enqueue(i);
    }
}

Refiner::Cell Refiner::make_cell(double lo, double hi, int depth, std::size_t next) const
{
    const RangeEnclosure e = range_on(f_, Interval(lo, hi));
    return {lo, hi, e, contribution(e, lo, hi), depth, next};
}

void Refiner::enqueue(std::size_t index)
{
    const Cell& c = cells_[index];
    if (c.contribution > 0.0 && splittable(c.lo, c.hi)) {
        queue_.insert({-c.contribution, c.lo, index});
        ++queued_depths_[c.depth];
    }
}

void Refiner::account(const Cell& c, int sign)
{
    const Interval w = width_enclosure(c.lo, c.hi);
    const Interval p = Interval(c.bounds.range.lo()) * w;
    const Interval q = Interval(c.bounds.range.hi()) * w;
    const Interval& ceiling = c.bounds.dense_inf ? p : q;
    const Interval& floor = c.bounds.dense_sup ? q : p;
    if (sign > 0) {
        running_lower_ = running_lower_ + p;
        running_upper_ = running_upper_ + q;
        running_ceiling_ = running_ceiling_ + ceiling;
        running_floor_ = running_floor_ + floor;
        if (!c.bounds.exact)
            ++inexact_cells_;
    } else {
        running_lower_ = running_lower_ - p;
        running_upper_ = running_upper_ - q;
        running_ceiling_ = running_ceiling_ - ceiling;
        running_floor_ = running_floor_ - floor;
        if (!c.bounds.exact)
            --inexact_cells_;
    }
}

bool Refiner::refine()
{
    if (queue_.empty())
        return false;
    const Key top = *queue_.begin();
    queue_.erase(queue_.begin());
    const std::size_t index = top.index;
    auto depth_it = queued_depths_.find(cells_[index].depth);
    if (--depth_it->second == 0)
        queued_depths_.erase(depth_it);

    const Cell old = cells_[index];
    account(old, -1);
    const double mid = std::midpoint(old.lo, old.hi);
    const std::size_t right_index = cells_.size();
    Cell left = make_cell(old.lo, mid, old.depth + 1, right_index);
    Cell right = make_cell(mid, old.hi, old.depth + 1, old.next);
    cells_[index] = left;
    cells_.push_back(right);
    account(left, +1);
    account(right, +1);
    enqueue(index);
    enqueue(right_index);
    ++rounds_;
    return true;
}

Partition Refiner::partition() const
{
    std::vector<double> pts;
    pts.reserve(cells_.size() + 1);
    std::size_t last = 0;
    for (std::size_t i = 0; i != npos; i = cells_[i].next) {
        pts.push_back(cells_[i].lo);
        last = i;
    }
    pts.push_back(cells_[last].hi);
    return Partition(std::move(pts));
}

DarbouxSums Refiner::sums(bool with_cells) const
{
    Accumulator acc;
    std::vector<CellRecord> records;
    if (with_cells)
        records.reserve(cells_.size());
    for (std::size_t i = 0; i != npos; i = cells_[i].next) {
        const Cell& c = cells_[i];
        const Interval w = width_enclosure(c.lo, c.hi);
        acc.add(c.bounds, w);
        if (with_cells)
            records.push_back({Interval(c.lo, c.hi), w, c.bounds});
    }
    DarbouxSums s = acc.finish();
    s.cells = std::move(records);
    return s;
}

double Refiner::running_gap() const
{
    return rounding::up(rounding::add(running_upper_.hi(), -running_lower_.lo()));
}

int Refiner::generation() const
{
    return queued_depths_.empty() ? -1 : queued_depths_.begin()->first;
}

// ---------------------------------------------------------------------------

namespace {

struct Snapshot {
    Interval gap; // [upper.lo - lower.hi, upper.hi - lower.lo]
    bool all_exact;
    double slack;
};

Interval gap_between(const Interval& lower, const Interval& upper)
{
    const double glo = rounding::down(rounding::add(upper.lo(), -lower.hi()));
    const double ghi = rounding::up(rounding::add(upper.hi(), -lower.lo()));
    return Interval(std::min(glo, ghi), ghi);
}

// Cheap snapshot from the running sums.
Snapshot snapshot_of(const Refiner& r)
{
    const Interval& lo = r.running_lower();
    const Interval& up = r.running_upper();
    const double scale = std::max({mag(lo), mag(up), 1e-300});
    const double slack = 2.0 * static_cast<double>(r.size()) * rounding::step(scale) + width(lo) + width(up);
    return {gap_between(lo, up), r.all_exact(), slack};
}

double rigorous_gap(const DarbouxSums& s)
{
    return rounding::up(rounding::add(s.upper.hi(), -s.lower.lo()));
}

IntegrabilityVerdict finish(const Refiner& r, const DarbouxSums& s, VerdictKind kind)
{
    IntegrabilityVerdict v;
    v.kind = kind;
    v.lower = s.lower;
    v.upper = s.upper;
    v.enclosure = Interval(std::min(s.lower.lo(), s.upper.hi()), s.upper.hi());
    v.gap = rigorous_gap(s);
    v.rounds = r.rounds();
    v.final_partition_size = r.size();
    v.slack = s.slack;
    return v;
}

// Gap that stayed put over the window, confirmed against a full recompute.
std::optional<IntegrabilityVerdict> stable_gap(const Refiner& r, const std::deque<Snapshot>& window, double tol)
{
    Interval gaps = window.front().gap;
    double slack = 0.0;
    for (const auto& s : window) {
        if (!s.all_exact || !(s.gap.lo() > tol))
            return std::nullopt;
        gaps = hull(gaps, s.gap);
        slack = std::max(slack, s.slack);
    }
    if (width(gaps) > slack)
        return std::nullopt;

    const DarbouxSums sums = r.sums();
    const Interval gap = gap_between(sums.lower, sums.upper);
    if (!(gap.lo() > tol) || !intersects(widen(gaps, slack), gap))
        return std::nullopt;
    IntegrabilityVerdict v = finish(r, sums, VerdictKind::NonIntegrable);
    v.certified_gap_lower_bound = std::min(gaps.lo(), gap.lo());
    const double proved =
        rounding::down(rounding::add(sums.upper_integral_floor, -sums.lower_integral_ceiling));
    v.gap_proved = proved >= v.certified_gap_lower_bound;
    return v;
}

} // namespace

IntegrabilityVerdict certify(const FuncExpr& f, double a, double b, double tol, std::size_t max_rounds,
                             const CertifyObserver& observer)
{
    if (!(a < b))
        throw InvalidInterval("certify needs a < b");
    if (!(tol > 0.0))
        throw NonPositiveTolerance();

    Refiner r(f, Partition({a, b}));
    std::deque<Snapshot> window;
    int last_generation = -2;

    for (;;) {
        if (observer)
            observer({r.rounds(), r.size(), r.running_lower(), r.running_upper(), r.running_gap()});

        if (r.running_gap() <= tol) {
            const DarbouxSums s = r.sums();
            if (rigorous_gap(s) <= tol)
                return finish(r, s, VerdictKind::Integrable);
        }

        const int generation = r.generation();
        if (generation != last_generation && generation >= 0) {
            last_generation = generation;
            window.push_back(snapshot_of(r));
            if (window.size() > kStabilityWindow + 1)
                window.pop_front();
            if (window.size() == kStabilityWindow + 1)
                if (auto v = stable_gap(r, window, tol))
                    return *v;
        }

        if (r.rounds() >= max_rounds || !r.refine())
            return finish(r, r.sums(), VerdictKind::Inconclusive);
    }
}

AdditivityReport lower_integral_additivity_check(const FuncExpr& f, double x, double y, double z,
                                                 std::size_t budget, double slack)
{
    if (!(x < y && y < z))
        throw InvalidInterval("additivity check needs x < y < z");
    Refiner r(f, Partition({x, y, z}));
    for (std::size_t i = 0; i < budget && r.refine(); ++i) {
    }
    const Partition whole = r.partition();
    const auto pts = whole.points();
    const auto split = std::find(pts.begin(), pts.end(), y);
    if (split == pts.end())
        throw std::logic_error("forced breakpoint lost during refinement");

    AdditivityReport rep;
    rep.partition_size = pts.size();
    rep.refines_concatenation = split != pts.end();
    const Partition left(std::vector<double>(pts.begin(), split + 1));
    const Partition right(std::vector<double>(split, pts.end()));
    const DarbouxSums sl = darboux_sums(f, left);
    const DarbouxSums sr = darboux_sums(f, right);
    const DarbouxSums sw = darboux_sums(f, whole);
    rep.left = sl.lower;
    rep.right = sr.lower;
    rep.whole = sw.lower;
    rep.discrepancy = mag((rep.left + rep.right) - rep.whole);
    rep.slack = std::max(slack, sl.slack + sr.slack + sw.slack);
    rep.holds = rep.refines_concatenation && rep.discrepancy <= rep.slack;
    return rep;
}

} // namespace darboux
