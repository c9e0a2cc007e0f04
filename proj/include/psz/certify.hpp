#ifndef PSZ_CERTIFY_HPP
#define PSZ_CERTIFY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psz/interval.hpp"

namespace psz {

// Coordinate charts for the quadrant {w >= 0} x {q >= 0}.  Unbounded
// directions are always compactified: r = 1/q and v = 1/w, so every
// certificate is a statement about a compact rectangle.
enum class Chart { WQ, WR, VQ, VR };

// What a region certificate bounds: the function A itself, its r-derivative
// in the (w,r) chart, or the second derivative of the q -> inf profile.
enum class Quantity { A, DrA, AinfDD };

struct RegionSpec {
    std::string name;
    Chart chart = Chart::WQ;
    double lo1 = 0.0, hi1 = 0.0;  // first chart coordinate (w or v)
    double lo2 = 0.0, hi2 = 0.0;  // second chart coordinate (q or r)
    double step1 = 0.0, step2 = 0.0;
    double threshold = 0.0;
    Quantity quantity = Quantity::A;
};

struct Certificate {
    std::string region;
    std::int64_t cells_total = 0;
    std::int64_t cells_refined = 0;  // bisection evaluations beyond the mesh
    std::int64_t cells_wide = 0;     // double-word re-evaluations
    double sup_bound = 0.0;          // certified upper bound over the region
    double threshold = 0.0;
    bool pass = false;               // pass iff sup_bound <= threshold
    double wall_time = 0.0;          // seconds
    // Lexicographically smallest cell whose bound could not be pushed under
    // the threshold within budget, as {lo1, hi1, lo2, hi2}.
    std::optional<std::array<double, 4>> failing_cell;
};

// Conjunction of region certificates with a single headline bound.
struct MasterCertificate {
    std::string name;
    bool pass = false;
    double sup_bound = 0.0;
    double threshold = 0.0;
    std::string failing_region;  // empty when pass
    std::vector<Certificate> parts;
    double wall_time = 0.0;
};

struct MonotoneClaim {
    std::string factor;    // the bracketed factor, as written
    std::string variable;  // "w" or "q"
    int direction = 0;     // +1 increasing, -1 decreasing
    bool certified = false;
};

struct AinfMax {
    double w_star = 0.0;
    double value = 0.0;
    bool certified_concave = false;
};

// Enclosure of {A(point) : point in cell} for a rectangle in the given
// chart.  Two sound strategies are intersected: the direct interval
// extension of the chart formula, and (in the (w,q) chart, when `tighten`)
// the corner-evaluated form whose bracketed factors are monotone in both
// variables.  Division-hazard edges (w + r = 0, q + v = 0, v = 0) go through
// rewritten forms whose denominators cannot vanish.
Interval interval_A(const Interval& c1, const Interval& c2, Chart chart,
                    bool tighten = true);

// Certifies, factor by factor, the monotonicity claims the corner strategy
// rests on, by interval-evaluating derivative expressions over a coarse
// tiling.  An undetermined claim disables tightening, never soundness.
std::vector<MonotoneClaim> verify_monotone_claims(const RegionSpec& region);

// Enclosure of d/dr A(w, 1/r) over a cell inside [1,4] x [0,1], from the
// analytic derivative of the rational r-form.
Interval bound_dr_A(const Interval& w, const Interval& r);

// Enclosure of the second derivative of A(w, inf) over a cell inside [1,4].
Interval bound_Ainf_dd(const Interval& w);

// Certifies concavity of A(w, inf) on [1,4], then locates its maximizer by
// golden section plus derivative bisection to w-tolerance 1e-12.
AinfMax maximize_A_inf();

// Tiles the rectangle at the requested mesh, bounds the quantity on every
// cell, and adaptively bisects cells whose upper bound exceeds the
// threshold.  `budget` caps the total refinement evaluations and is split
// evenly over the initial cells (never below 64 per cell), which keeps the
// result independent of the thread count.
Certificate verify_region(const RegionSpec& spec,
                          std::int64_t budget = 10000000, int threads = 1);

// Same run, also streaming one CSV row per initial mesh cell.  Refuses
// meshes above five million cells.
Certificate verify_region_dump(const RegionSpec& spec, std::int64_t budget,
                               int threads, const std::string& csv_path);

// The named standard regions R1..R9 with their published meshes and
// thresholds, plus the two derived one-dimensional sweeps
// "R3-Ainf-concavity" and "R3-Ainf-max".
RegionSpec standard_region(const std::string& name);

// Master certificate for sup A <= 0.63 over the whole quadrant: regions R1,
// R2, R4, R5 bound A directly; on R3 the derivative sweep shows A is
// maximized at r = 0 and the certified concave maximum of A(w, inf) closes
// the gap.  `threshold_scale` rescales every threshold (used to probe
// honest failure).
MasterCertificate verify_calc(std::int64_t budget = 10000000,
                              double threshold_scale = 1.0, int threads = 1);

// Master certificate for sup A <= 0.5 over {0 <= q <= 1.36} via regions
// R6..R9.
MasterCertificate verify_calc_half(std::int64_t budget = 10000000,
                                   double threshold_scale = 1.0,
                                   int threads = 1);

}  // namespace psz

#endif  // PSZ_CERTIFY_HPP
