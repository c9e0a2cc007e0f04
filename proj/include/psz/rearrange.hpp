// Symmetric decreasing rearrangement u -> u* for piecewise-linear functions,
// with exact level-set bookkeeping, plus a grid variant for sampled data.

#pragma once

#include <vector>

#include "psz/function_model.hpp"

namespace psz {

// Distribution data of u: distinct levels 0 = t_0 < ... < t_m = max u and,
// on each band [t_k, t_{k+1}), the measure mu(t) = |{u > t}| as an affine
// function of t (value at the band's left edge plus slope).
struct LevelProfile {
    std::vector<double> levels;
    std::vector<double> band_value;
    std::vector<double> band_slope;
};

LevelProfile build_level_profile(const PiecewiseLinear& u);

// Lebesgue measure of {x : u(x) > t}, exact per-segment closed form.
double distribution_measure(const PiecewiseLinear& u, double t);

// Measure of the closed variant {x : u(x) >= t} for t > 0.  The
// rearrangement uses open/closed pairs so plateau widths come out as
// differences of half-measures instead of accumulated sums.
double closed_level_measure(const PiecewiseLinear& u, double t);

// Remove interior breakpoints where the slope does not change (relative
// tolerance 1e-12); values at kept breakpoints are untouched.
PiecewiseLinear canonicalize(const PiecewiseLinear& u);

PiecewiseLinear symmetrize(const PiecewiseLinear& u);

// Sort nonnegative cell samples into the symmetric-decreasing arrangement:
// largest in the middle cell(s), decreasing outward.
std::vector<double> symmetrize_grid(const std::vector<double>& samples, double cell_width);

} // namespace psz
