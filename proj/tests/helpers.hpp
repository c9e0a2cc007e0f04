// Shared test utilities: random valid inputs and simple closed-form oracles.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "psz/function_model.hpp"

namespace testutil {

// Random valid PiecewiseLinear with up to max_interior interior breakpoints;
// occasionally inserts plateaus and interior zeros to exercise edge cases.
inline psz::PiecewiseLinear random_piecewise_linear(std::mt19937_64& rng, int max_interior = 8) {
    std::uniform_int_distribution<int> nd(1, max_interior);
    std::uniform_real_distribution<double> xd(-0.98, 0.98);
    std::uniform_real_distribution<double> vd(0.0, 2.5);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const int n = nd(rng);
    std::vector<double> xs;
    while (static_cast<int>(xs.size()) < n) {
        const double x = xd(rng);
        bool clash = false;
        for (double y : xs)
            if (std::abs(x - y) < 1e-6) clash = true;
        if (!clash) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());

    std::vector<double> bp{-1.0};
    bp.insert(bp.end(), xs.begin(), xs.end());
    bp.push_back(1.0);

    std::vector<double> val(bp.size(), 0.0);
    for (std::size_t i = 1; i + 1 < val.size(); ++i) {
        const double c = coin(rng);
        if (c < 0.15) {
            val[i] = 0.0;
        } else if (c < 0.35 && i >= 2) {
            val[i] = val[i - 1]; // plateau
        } else {
            val[i] = vd(rng);
        }
    }
    return psz::PiecewiseLinear(bp, val);
}

// Exact integral of a piecewise-linear function over [a, b] within [-1,1].
inline double integral_pl(const psz::PiecewiseLinear& u, double a, double b) {
    double total = 0.0;
    for (const auto& s : u.segments()) {
        const double lo = std::max(a, s.x_lo);
        const double hi = std::min(b, s.x_hi);
        if (lo < hi) total += 0.5 * (s.value_at(lo) + s.value_at(hi)) * (hi - lo);
    }
    return total;
}

// Sum over segments of |slope|^p0 * length: the gradient functional for a
// constant exponent, in closed form.
inline double grad_energy_const_p(const psz::PiecewiseLinear& u, double p0) {
    double total = 0.0;
    for (const auto& s : u.segments()) {
        if (s.slope == 0.0) continue;
        total += std::pow(std::abs(s.slope), p0) * (s.x_hi - s.x_lo);
    }
    return total;
}

} // namespace testutil
