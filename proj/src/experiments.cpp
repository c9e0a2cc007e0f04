#include "psz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "psz/rearrange.hpp"

namespace psz {

namespace {

TrialReport base_report(std::vector<std::pair<std::string, double>> inputs,
                        double original, double symmetrized, double tolerance) {
    TrialReport r;
    r.inputs = std::move(inputs);
    r.value_original = original;
    r.value_symmetrized = symmetrized;
    r.gap = original - symmetrized;
    r.tolerance = tolerance;
    r.pass = r.gap >= -tolerance;
    return r;
}

// Pass margin: two orders above the quadrature error estimate, floored at
// the stated trial tolerance.
double gap_tolerance(const FunctionalResult& a, const FunctionalResult& b) {
    return std::max(1e-9, 10.0 * (a.est_error + b.est_error));
}

constexpr double kDemoCu = 0.765;    // upper band: y-slope 1/kDemoCu
constexpr double kDemoCl = 1.235;    // lower band
constexpr double kDemoDu = 2.008;    // upper shear tilt
constexpr double kDemoDl = 5.992;    // lower shear tilt
constexpr double kDemoYu = 0.7715;   // upper boundary intercept
constexpr double kDemoYl = -0.2285;  // lower boundary intercept
constexpr double kDemoZig = 0.025;   // zigzag amplitude
constexpr double kDemoCap = 0.2;     // height cap
constexpr double kDemoFlat = 0.7;    // cap taper: full height for |x| <= 0.7
constexpr double kDemoEdge = 0.95;   // cap reaches zero at |x| = 0.95

// Triangle wave with slope +-1 and amplitude za, vanishing at x = 0.
double zig_wave(double x, double za) {
    const double period = 4.0 * za;
    double t = std::fmod(x + za, period);
    if (t < 0.0) t += period;
    return t < 2.0 * za ? t - za : 3.0 * za - t;
}

double demo_cap(double x) {
    const double ramp = std::clamp((kDemoEdge - std::abs(x)) / (kDemoEdge - kDemoFlat), 0.0, 1.0);
    return kDemoCap * ramp;
}

double demo_field(double x, double y) {
    const double z = zig_wave(x, kDemoZig);
    const double fup = (kDemoYu + kDemoDu * z - y) / kDemoCu;
    const double flo = (y - (kDemoYl - kDemoDl * z)) / kDemoCl;
    return std::max(0.0, std::min({fup, flo, demo_cap(x)}));
}

void check_grid(const std::vector<ExponentSpec>& p_cols, const Grid2D& g) {
    if (g.nx < 3 || g.ny < 3)
        throw std::invalid_argument("steiner_grid_demo: need at least 3 cells per axis");
    if (!(g.hx > 0.0) || !(g.hy > 0.0))
        throw std::invalid_argument("steiner_grid_demo: cell sizes must be positive");
    if (std::abs(g.ny * g.hy - 2.0) > 1e-9)
        throw std::invalid_argument("steiner_grid_demo: y-cells must tile (-1,1)");
    if (g.samples.size() != static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny))
        throw std::invalid_argument("steiner_grid_demo: sample count mismatch");
    if (p_cols.size() != static_cast<std::size_t>(g.nx))
        throw std::invalid_argument("steiner_grid_demo: one exponent profile per column required");
    for (double v : g.samples)
        if (!(std::isfinite(v) && v >= 0.0))
            throw std::invalid_argument("steiner_grid_demo: samples must be finite and >= 0");
    for (int ix = 0; ix < g.nx; ++ix) {
        if (g.samples[static_cast<std::size_t>(ix) * g.ny] != 0.0 ||
            g.samples[static_cast<std::size_t>(ix) * g.ny + g.ny - 1] != 0.0)
            throw std::invalid_argument("steiner_grid_demo: boundary y-rows must be zero");
    }
}

// Central differences with zero ghost values outside the grid, midpoint
// quadrature at the cell centers.
double discrete_energy(const std::vector<ExponentSpec>& p_cols,
                       const std::vector<double>& u, int nx, int ny, double hx,
                       double hy) {
    auto at = [&](int ix, int iy) -> double {
        if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) return 0.0;
        return u[static_cast<std::size_t>(ix) * ny + iy];
    };
    double total = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const ExponentSpec& pc = p_cols[ix];
        for (int iy = 0; iy < ny; ++iy) {
            const double gx = (at(ix + 1, iy) - at(ix - 1, iy)) / (2.0 * hx);
            const double gy = (at(ix, iy + 1) - at(ix, iy - 1)) / (2.0 * hy);
            const double yc = -1.0 + (iy + 0.5) * hy;
            total += std::pow(1.0 + gx * gx + gy * gy, 0.5 * pc.p(yc));
        }
    }
    return hx * hy * total;
}

}  // namespace

double TrialReport::input(const std::string& key) const {
    for (const auto& [k, v] : inputs)
        if (k == key) return v;
    throw std::out_of_range("TrialReport has no input " + key);
}

TrialReport j_rearrangement_gap(const ExponentSpec& p, double x0, double alpha,
                                double eps, const QuadratureConfig& cfg) {
    const PiecewiseLinear u = make_hat(x0, alpha, eps);
    const PiecewiseLinear us = symmetrize(u);
    const FunctionalResult fo = eval_J_detailed(u, p, cfg);
    const FunctionalResult fs = eval_J_detailed(us, p, cfg);
    return base_report({{"x0", x0}, {"alpha", alpha}, {"eps", eps}},
                       fo.value, fs.value, gap_tolerance(fo, fs));
}

std::optional<TrialReport> find_j_counterexample(const ExponentSpec& p,
                                                 const QuadratureConfig& cfg) {
    for (int i = 0; i <= 12; ++i) {
        const double x0 = -0.9 + 0.15 * i;
        for (const double alpha : {0.25, 0.5, 2.0, 4.0}) {
            for (const double eps : {1e-2, 1e-3}) {
                TrialReport r = j_rearrangement_gap(p, x0, alpha, eps, cfg);
                if (!r.pass) return r;
            }
        }
    }
    return std::nullopt;
}

std::vector<TrialReport> preconv_probe(const ExponentSpec& p, double x1, double x2,
                                       double s, double t,
                                       const std::vector<double>& eps_list,
                                       const QuadratureConfig& cfg) {
    if (eps_list.empty())
        throw std::invalid_argument("preconv_probe: need at least one eps");
    const double m = 0.5 * (s + t);
    const double closed = eval_K(s, x1, p) + eval_K(t, x2, p) -
                          eval_K(m, 0.5 * (x1 - x2), p) -
                          eval_K(m, 0.5 * (x2 - x1), p);

    std::vector<TrialReport> out;
    out.reserve(eps_list.size());
    for (const double eps : eps_list) {
        const PiecewiseLinear u = make_double_ramp(x1, x2, s, t, eps);
        const PiecewiseLinear us = symmetrize(u);
        const FunctionalResult fo = eval_I_detailed(u, p, cfg);
        const FunctionalResult fs = eval_I_detailed(us, p, cfg);
        TrialReport r = base_report({{"x1", x1},
                                     {"x2", x2},
                                     {"s", s},
                                     {"t", t},
                                     {"eps", eps}},
                                    fo.value, fs.value, gap_tolerance(fo, fs));
        r.inputs.emplace_back("closed_form_gap", closed);
        r.inputs.emplace_back("scaled_gap", r.gap / (2.0 * eps));
        out.push_back(std::move(r));
    }
    return out;
}

TrialReport random_I_trial(const ExponentSpec& p, std::uint64_t seed, int n_nodes,
                           bool allow_plateaus, const QuadratureConfig& cfg) {
    if (n_nodes < 0 || n_nodes > 1000)
        throw std::invalid_argument("random_I_trial: n_nodes out of range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xd(-0.98, 0.98);
    std::uniform_real_distribution<double> hd(0.0, 1.0);

    std::vector<double> xs;
    while (static_cast<int>(xs.size()) < n_nodes) {
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
        val[i] = hd(rng);
        if (allow_plateaus && i >= 2 && hd(rng) < 0.25) val[i] = val[i - 1];
    }

    const PiecewiseLinear u(bp, val);
    const PiecewiseLinear us = symmetrize(u);
    const FunctionalResult fo = eval_I_detailed(u, p, cfg);
    const FunctionalResult fs = eval_I_detailed(us, p, cfg);
    return base_report({{"seed", static_cast<double>(seed)},
                        {"n_nodes", static_cast<double>(n_nodes)},
                        {"allow_plateaus", allow_plateaus ? 1.0 : 0.0}},
                       fo.value, fs.value, 1e-9);
}

SuiteSummary run_I_suite(const ExponentSpec& p, int trials, std::uint64_t base_seed,
                         int max_nodes, int threads, bool allow_plateaus,
                         const QuadratureConfig& cfg) {
    if (trials < 1) throw std::invalid_argument("run_I_suite: trials must be >= 1");
    if (max_nodes < 1 || max_nodes > 1000)
        throw std::invalid_argument("run_I_suite: max_nodes out of range");
    if (threads < 1) throw std::invalid_argument("run_I_suite: threads must be >= 1");

    SuiteSummary summary;
    summary.trials = trials;
    summary.reports.resize(trials);

    auto run_block = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            std::mt19937_64 mix(base_seed + static_cast<std::uint64_t>(i));
            std::uniform_int_distribution<int> nd(1, max_nodes);
            const int n_nodes = nd(mix);
            summary.reports[i] = random_I_trial(p, mix(), n_nodes, allow_plateaus, cfg);
        }
    };

    const int workers = std::min(threads, trials);
    if (workers == 1) {
        run_block(0, trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(trials, begin + chunk);
            if (begin < end) pool.emplace_back(run_block, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    summary.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : summary.reports) {
        if (!r.pass) ++summary.failures;
        summary.min_gap = std::min(summary.min_gap, r.gap);
    }
    return summary;
}

TrialReport quasiconv_trial(const ExponentSpec& p, int m,
                            const std::vector<double>& s,
                            const std::vector<double>& x) {
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("quasiconv_trial: m must be even and >= 2");
    if (s.size() != static_cast<std::size_t>(m) || x.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("quasiconv_trial: need m slopes and m points");
    for (int k = 0; k < m; ++k) {
        if (!(s[k] > 0.0) || !std::isfinite(s[k]))
            throw std::invalid_argument("quasiconv_trial: slopes must be positive");
        if (x[k] < -1.0 || x[k] > 1.0 || (k > 0 && x[k] < x[k - 1]))
            throw std::invalid_argument("quasiconv_trial: points must ascend within [-1,1]");
    }

    double lhs = 0.0, s_sum = 0.0, x_alt = 0.0;
    for (int k = 0; k < m; ++k) {
        lhs += eval_K(s[k], x[k], p);
        s_sum += s[k];
        x_alt += (k % 2 == 0 ? -x[k] : x[k]);
    }
    const double rhs = 2.0 * eval_K(0.5 * s_sum, 0.5 * x_alt, p);

    std::vector<std::pair<std::string, double>> inputs{{"m", static_cast<double>(m)}};
    for (int k = 0; k < m; ++k) inputs.emplace_back("s" + std::to_string(k + 1), s[k]);
    for (int k = 0; k < m; ++k) inputs.emplace_back("x" + std::to_string(k + 1), x[k]);
    return base_report(std::move(inputs), lhs, rhs, 1e-10);
}

Grid2D sample_grid(int nx, int ny, const std::function<double(double, double)>& f) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("sample_grid: cell counts must be positive");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.hx = 2.0 / nx;
    g.hy = 2.0 / ny;
    g.samples.resize(static_cast<std::size_t>(nx) * ny);
    for (int ix = 0; ix < nx; ++ix) {
        const double xc = -1.0 + (ix + 0.5) * g.hx;
        for (int iy = 0; iy < ny; ++iy) {
            double v = 0.0;
            if (iy != 0 && iy != ny - 1) {
                const double yc = -1.0 + (iy + 0.5) * g.hy;
                v = f(xc, yc);
                if (!(std::isfinite(v) && v >= 0.0))
                    throw std::invalid_argument("sample_grid: field must be finite and >= 0");
            }
            g.samples[static_cast<std::size_t>(ix) * ny + iy] = v;
        }
    }
    return g;
}

Grid2D demo_two_band_grid(int n) {
    if (n < 8) throw std::invalid_argument("demo_two_band_grid: resolution too coarse");
    return sample_grid(n, n, demo_field);
}

SteinerResult steiner_grid_demo(const std::vector<ExponentSpec>& p_cols,
                                const Grid2D& grid) {
    check_grid(p_cols, grid);

    SteinerResult res;
    res.I_original =
        discrete_energy(p_cols, grid.samples, grid.nx, grid.ny, grid.hx, grid.hy);

    std::vector<double> symmetrized(grid.samples.size());
    std::vector<double> column(grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const std::size_t off = static_cast<std::size_t>(ix) * grid.ny;
        std::copy_n(grid.samples.begin() + off, grid.ny, column.begin());
        const std::vector<double> sym = symmetrize_grid(column, grid.hy);
        std::copy(sym.begin(), sym.end(), symmetrized.begin() + off);
    }
    res.I_symmetrized =
        discrete_energy(p_cols, symmetrized, grid.nx, grid.ny, grid.hx, grid.hy);
    return res;
}

}  // namespace psz
