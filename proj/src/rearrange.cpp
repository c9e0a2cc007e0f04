#include "psz/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace psz {

namespace {

// Sub-intervals of [-1,1] where u > t (or u >= t), in ascending order.
// Adjacent segments share breakpoint doubles, so contiguous pieces merge
// without gaps and the measure of a merged run is a single subtraction.
std::vector<std::pair<double, double>> superlevel_runs(const PiecewiseLinear& u, double t,
                                                       bool closed) {
    const auto& bp = u.breakpoints();
    const auto& val = u.values();
    auto above = [&](double v) { return closed ? v >= t : v > t; };

    std::vector<std::pair<double, double>> raw;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double xl = bp[i], xr = bp[i + 1];
        const double vl = val[i], vr = val[i + 1];
        if (vl == vr) {
            if (above(vl)) raw.emplace_back(xl, xr);
            continue;
        }
        double th = (t - vl) / (vr - vl);
        th = std::clamp(th, 0.0, 1.0);
        const double xi = xl * (1.0 - th) + xr * th; // exact at th = 0 and 1
        if (above(vl) && above(vr)) {
            raw.emplace_back(xl, xr);
        } else if (above(vl)) {
            raw.emplace_back(xl, xi);
        } else if (above(vr)) {
            raw.emplace_back(xi, xr);
        }
    }

    std::vector<std::pair<double, double>> merged;
    for (const auto& r : raw) {
        if (!merged.empty() && r.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, r.second);
        else
            merged.push_back(r);
    }
    return merged;
}

double runs_measure(const std::vector<std::pair<double, double>>& runs) {
    double total = 0.0;
    for (const auto& r : runs) total += r.second - r.first;
    return total;
}

} // namespace

double distribution_measure(const PiecewiseLinear& u, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("distribution_measure: t must be >= 0");
    return runs_measure(superlevel_runs(u, t, false));
}

double closed_level_measure(const PiecewiseLinear& u, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("closed_level_measure: t must be > 0");
    return runs_measure(superlevel_runs(u, t, true));
}

LevelProfile build_level_profile(const PiecewiseLinear& u) {
    LevelProfile prof;
    prof.levels.push_back(0.0);
    for (double v : u.values())
        if (v > 0.0) prof.levels.push_back(v);
    std::sort(prof.levels.begin(), prof.levels.end());
    prof.levels.erase(std::unique(prof.levels.begin(), prof.levels.end()), prof.levels.end());

    const auto segs = u.segments();
    for (std::size_t k = 0; k + 1 < prof.levels.size(); ++k) {
        const double t_lo = prof.levels[k], t_hi = prof.levels[k + 1];
        prof.band_value.push_back(distribution_measure(u, t_lo));
        double slope = 0.0;
        for (const auto& s : segs) {
            if (s.slope == 0.0) continue;
            const double vmin = std::min(s.intercept, s.v_hi);
            const double vmax = std::max(s.intercept, s.v_hi);
            if (vmin <= t_lo && vmax >= t_hi) slope -= 1.0 / std::abs(s.slope);
        }
        prof.band_slope.push_back(slope);
    }
    return prof;
}

PiecewiseLinear canonicalize(const PiecewiseLinear& u) {
    const auto& bp = u.breakpoints();
    const auto& val = u.values();
    std::vector<double> nbp{bp.front()};
    std::vector<double> nval{val.front()};
    for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
        const double sl = (val[i] - nval.back()) / (bp[i] - nbp.back());
        const double sr = (val[i + 1] - val[i]) / (bp[i + 1] - bp[i]);
        const double scale = std::max({1.0, std::abs(sl), std::abs(sr)});
        if (std::abs(sl - sr) > 1e-12 * scale) {
            nbp.push_back(bp[i]);
            nval.push_back(val[i]);
        }
    }
    nbp.push_back(bp.back());
    nval.push_back(val.back());
    return PiecewiseLinear(std::move(nbp), std::move(nval));
}

PiecewiseLinear symmetrize(const PiecewiseLinear& u) {
    std::vector<double> levels;
    for (double v : u.values())
        if (v > 0.0) levels.push_back(v);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) return PiecewiseLinear({-1.0, 1.0}, {0.0, 0.0});

    // Right-half nodes (x, value), ascending in value, descending in x.
    // Every x is half of a level-set measure of u, so the second pass over
    // u* reproduces these nodes bit-for-bit (idempotence) and level-wise
    // equimeasurability is exact.
    std::vector<std::pair<double, double>> right;
    right.emplace_back(0.5 * distribution_measure(u, 0.0), 0.0);
    auto push_node = [&right](double x, double v) {
        x = std::min(x, right.back().first); // guard against rounding inversions
        if (x == right.back().first)
            right.back().second = v;
        else
            right.emplace_back(x, v);
    };
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double t = levels[j];
        const double half_closed = 0.5 * closed_level_measure(u, t);
        const double half_open = 0.5 * distribution_measure(u, t);
        push_node(half_closed, t);
        const bool top = (j + 1 == levels.size());
        if (!top && half_open < half_closed) push_node(half_open, t);
    }

    std::vector<double> bp, val;
    bp.push_back(-1.0);
    val.push_back(0.0);
    for (const auto& node : right) {
        if (node.first == 1.0) continue; // support reaches the boundary node
        bp.push_back(node.first == 0.0 ? 0.0 : -node.first);
        val.push_back(node.second);
    }
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
        if (it->first == 0.0 || it->first == 1.0) continue;
        bp.push_back(it->first);
        val.push_back(it->second);
    }
    bp.push_back(1.0);
    val.push_back(0.0);
    return canonicalize(PiecewiseLinear(std::move(bp), std::move(val)));
}

std::vector<double> symmetrize_grid(const std::vector<double>& samples, double cell_width) {
    if (samples.empty()) throw std::invalid_argument("symmetrize_grid: need at least one sample");
    if (!(cell_width > 0.0)) throw std::invalid_argument("symmetrize_grid: cell_width must be > 0");
    for (double v : samples)
        if (!(std::isfinite(v) && v >= 0.0))
            throw std::invalid_argument("symmetrize_grid: samples must be finite and >= 0");

    const std::size_t m = samples.size();
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    // Slots ordered by distance from the center; at equal distance the right
    // cell is filled first, which matches the documented arrangement.
    std::vector<std::size_t> slots(m);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    const double c = 0.5 * static_cast<double>(m - 1);
    std::sort(slots.begin(), slots.end(), [c](std::size_t a, std::size_t b) {
        const double da = std::abs(static_cast<double>(a) - c);
        const double db = std::abs(static_cast<double>(b) - c);
        if (da != db) return da < db;
        return a > b;
    });

    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) out[slots[k]] = sorted[k];
    return out;
}

} // namespace psz
