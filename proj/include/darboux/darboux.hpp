#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "darboux/expr.hpp"
#include "darboux/interval.hpp"

namespace darboux {

// Breakpoints a = x0 < x1 < ... < xn = b, n >= 1.
class Partition {
public:
    explicit Partition(std::vector<double> points); // throws InvalidPartition
    static Partition uniform(double a, double b, std::size_t cells);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t cells() const noexcept { return points_.size() - 1; }
    double a() const noexcept { return points_.front(); }
    double b() const noexcept { return points_.back(); }
    Interval cell(std::size_t i) const { return Interval(points_[i], points_[i + 1]); }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<double> points_;
};

struct CellRecord {
    Interval cell;
    Interval width;         // enclosure of hi - lo
    RangeEnclosure bounds;  // (p, q) = (bounds.range.lo, bounds.range.hi)
};

struct DarbouxSums {
    Interval lower; // encloses sum of p_i * width_i
    Interval upper; // encloses sum of q_i * width_i
    // Rigorous bounds on the lower/upper integrals that use attainment
    // information: lower integral <= lower_integral_ceiling and
    // upper integral >= upper_integral_floor.
    double lower_integral_ceiling = 0.0;
    double upper_integral_floor = 0.0;
    // Allowance for comparing quantities computed along different routes:
    // two rounding steps per cell at the magnitude of the sums.
    double slack = 0.0;
    std::vector<CellRecord> cells;
};

// Cell bounds come from range_on, so they are valid lower/upper bounds and
// the results are genuine Darboux sums (not approximations of them).
DarbouxSums darboux_sums(const FuncExpr& f, const Partition& p);
Interval lower_sum(const FuncExpr& f, const Partition& p);
Interval upper_sum(const FuncExpr& f, const Partition& p);

// Bisects the cell with the largest (q - p) * width, leftmost on ties.
// Returns p unchanged when no cell can be split.
Partition refine_once(const FuncExpr& f, const Partition& p);

// Incremental greedy refinement. Each refine() bisects one cell and updates
// running sums in O(log n).
class Refiner {
public:
    Refiner(FuncExpr f, const Partition& seed);

    // False when no cell with a positive contribution can be split.
    bool refine();

    std::size_t rounds() const noexcept { return rounds_; }
    std::size_t size() const noexcept { return cells_.size() + 1; }
    Partition partition() const;

    // Sums recomputed left to right from the stored cell bounds.
    DarbouxSums sums(bool with_cells = false) const;

    // Running enclosures; slightly wider than sums() after many updates.
    const Interval& running_lower() const noexcept { return running_lower_; }
    const Interval& running_upper() const noexcept { return running_upper_; }
    double running_gap() const;
    // Running versions of DarbouxSums::lower_integral_ceiling / upper_integral_floor.
    double running_ceiling() const noexcept { return running_ceiling_.hi(); }
    double running_floor() const noexcept { return running_floor_.lo(); }

    // Smallest bisection depth among cells that still contribute, -1 if none.
    int generation() const;
    bool all_exact() const noexcept { return inexact_cells_ == 0; }

private:
    struct Cell {
        double lo;
        double hi;
        RangeEnclosure bounds;
        double contribution;
        int depth;
        std::size_t next; // index of the right neighbour, npos at the end
    };
    struct Key {
        double neg_contribution;
        double lo;
        std::size_t index;
        bool operator<(const Key& o) const
        {
            return neg_contribution != o.neg_contribution ? neg_contribution < o.neg_contribution
                                                          : lo < o.lo;
        }
    };

    Cell make_cell(double lo, double hi, int depth, std::size_t next) const;
    void enqueue(std::size_t index);
    void account(const Cell& c, int sign);

    FuncExpr f_;
    std::vector<Cell> cells_;
    std::set<Key> queue_;
    std::map<int, std::size_t> queued_depths_;
    std::size_t inexact_cells_ = 0;
    std::size_t rounds_ = 0;
    Interval running_lower_;
    Interval running_upper_;
    Interval running_ceiling_;
    Interval running_floor_;
};

enum class VerdictKind { Integrable, NonIntegrable, Inconclusive };

struct IntegrabilityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    Interval enclosure;  // [lower.lo, upper.hi]
    Interval lower;
    Interval upper;
    double gap = 0.0;    // upper.hi - lower.lo, rounded up
    // NonIntegrable: lower bound on the stable computed gap. gap_proved is set
    // when attainment information also bounds upper minus lower integral below
    // by this value.
    double certified_gap_lower_bound = 0.0;
    bool gap_proved = false;
    std::size_t rounds = 0;
    std::size_t final_partition_size = 0;
    double slack = 0.0;
};

struct CertifyProgress {
    std::size_t round;
    std::size_t partition_size;
    Interval lower;
    Interval upper;
    double gap;
};

using CertifyObserver = std::function<void(const CertifyProgress&)>;

// Snapshots of the sums are taken each time the refinement generation
// advances; NonIntegrable needs this many consecutive equal-gap snapshots
// beyond the first, with every cell bound exact.
inline constexpr std::size_t kStabilityWindow = 5;

IntegrabilityVerdict certify(const FuncExpr& f, double a, double b, double tol, std::size_t max_rounds,
                             const CertifyObserver& observer = {});

struct AdditivityReport {
    Interval left;  // lower sum on [x, y]
    Interval right; // lower sum on [y, z]
    Interval whole; // lower sum on [x, z]
    double discrepancy = 0.0; // upper bound of |left + right - whole|
    double slack = 0.0;
    bool refines_concatenation = false;
    bool holds = false;
    std::size_t partition_size = 0;
};

// Refines [x, z] with y as a forced breakpoint, then compares the lower sum
// with the sums over its restrictions to [x, y] and [y, z].
AdditivityReport lower_integral_additivity_check(const FuncExpr& f, double x, double y, double z,
                                                 std::size_t budget, double slack = 1e-9);

} // namespace darboux
