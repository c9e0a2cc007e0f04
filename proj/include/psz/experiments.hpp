#ifndef PSZ_EXPERIMENTS_HPP
#define PSZ_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psz/function_model.hpp"
#include "psz/functionals.hpp"

namespace psz {

// One symmetrization trial: the functional value before and after
// rearrangement, their gap (original minus symmetrized), and a verdict.
// For monotonicity trials pass means gap >= -tolerance; a confirmed
// counterexample is exactly a trial with pass == false.
struct TrialReport {
    std::vector<std::pair<std::string, double>> inputs;
    double value_original = 0.0;
    double value_symmetrized = 0.0;
    double gap = 0.0;
    bool pass = false;
    double tolerance = 0.0;

    double input(const std::string& key) const;
};

// Cell-centered samples of a nonnegative field on a rectangle whose second
// coordinate spans (-1, 1); samples[ix * ny + iy].  The first and last
// y-rows are zero (homogeneous boundary).
struct Grid2D {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    std::vector<double> samples;
};

struct SteinerResult {
    double I_original = 0.0;
    double I_symmetrized = 0.0;
};

struct SuiteSummary {
    int trials = 0;
    int failures = 0;
    double min_gap = 0.0;
    std::vector<TrialReport> reports;
};

// Gap J(u) - J(u*) for the tent of height alpha*eps at x0.  With a
// constant exponent the gap vanishes; a gap below -tolerance witnesses
// that the rearrangement inequality fails for this exponent.
TrialReport j_rearrangement_gap(const ExponentSpec& p, double x0, double alpha,
                                double eps, const QuadratureConfig& cfg = {});

// Scans tent positions x0 in {-0.9, -0.75, ..., 0.9}, heights
// alpha in {1/4, 1/2, 2, 4} and widths eps in {1e-2, 1e-3}; returns the
// first trial whose gap is confirmed negative (10x beyond quadrature
// error), or nothing when every trial passes.
std::optional<TrialReport> find_j_counterexample(const ExponentSpec& p,
                                                 const QuadratureConfig& cfg = {});

// For each eps builds the two-ramp profile rising at x1 (slope 1/s) and
// falling at x2 (slope 1/t), and reports I(u_eps) - I(u_eps*).  Each
// report also carries, under inputs keys "closed_form_gap" and
// "scaled_gap", the limiting kernel-form gap
//   K(s,x1) + K(t,x2) - K(m,(x1-x2)/2) - K(m,(x2-x1)/2),  m = (s+t)/2,
// and the finite-eps gap divided by 2*eps, which converges to it.
std::vector<TrialReport> preconv_probe(const ExponentSpec& p, double x1, double x2,
                                       double s, double t,
                                       const std::vector<double>& eps_list,
                                       const QuadratureConfig& cfg = {});

// Random piecewise-linear profile with n_nodes interior breakpoints
// (uniform positions, uniform heights in [0,1], zero endpoints); reports
// I(u) - I(u*).  Plateaus are off by default so quadrature stays exactly
// checkable; allow_plateaus inserts them with probability 1/4 per node.
TrialReport random_I_trial(const ExponentSpec& p, std::uint64_t seed, int n_nodes,
                           bool allow_plateaus = false,
                           const QuadratureConfig& cfg = {});

// Batch of random_I_trial runs with per-trial seeds and node counts
// derived from base_seed; identical results for any thread count.
SuiteSummary run_I_suite(const ExponentSpec& p, int trials, std::uint64_t base_seed,
                         int max_nodes = 12, int threads = 1,
                         bool allow_plateaus = false,
                         const QuadratureConfig& cfg = {});

// Kernel-sum trial: sum of K(s_k, x_k) against twice the kernel at the
// averaged slope and the alternating x-midpoint.  m must be even, the
// s_k positive, the x_k ascending in [-1,1].
TrialReport quasiconv_trial(const ExponentSpec& p, int m,
                            const std::vector<double>& s,
                            const std::vector<double>& x);

// Samples f at the cell centers of an nx x ny grid on [-1,1]^2 and pins
// the first and last y-rows to zero.
Grid2D sample_grid(int nx, int ny, const std::function<double(double, double)>& f);

// Two opposing tilted bands with a zigzag shear and a height cap tapered
// toward the x-boundary, sampled at resolution n x n.  Under the
// exponent 2 + y^2 the column-symmetrized field has strictly larger
// discrete energy at every tested resolution, illustrating that a
// y-dependent exponent breaks the symmetrization inequality on a
// cylinder.
Grid2D demo_two_band_grid(int n);

// Discrete energy sum_cells (1 + |grad u|^2)^(p(x',y)/2) hx hy with
// central-difference gradients (zero ghost values), evaluated before and
// after column-wise symmetrization in y.  p_cols supplies the exponent
// profile in y for each x'-column.  Demonstration only: grid bias is
// O(h), so small gaps carry no certified sign.
SteinerResult steiner_grid_demo(const std::vector<ExponentSpec>& p_cols,
                                const Grid2D& grid);

}  // namespace psz

#endif  // PSZ_EXPERIMENTS_HPP
