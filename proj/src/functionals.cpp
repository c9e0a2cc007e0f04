#include "psz/functionals.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace psz {

namespace {

void check_config(const QuadratureConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_depth < 1)
        throw std::invalid_argument("QuadratureConfig: tolerances > 0 and max_depth >= 1");
}

// log(1 + b^2) without overflowing b^2.
double log1p_sq(double b) {
    const double ab = std::abs(b);
    if (ab > 1e150) return 2.0 * std::log(ab);
    return std::log1p(ab * ab);
}

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

// Adaptive Simpson over one interval with an explicit work stack, so a
// depth failure can report the best estimate assembled so far.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const QuadratureConfig& cfg, double& err_out) {
    struct Item {
        double a, b, fa, fm, fb, s;
        int depth;
    };

    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double s0 = simpson(fa, fm, fb, b - a);
    const double eps0 = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(s0));

    std::vector<Item> stack{{a, b, fa, fm, fb, s0, 0}};
    double done = 0.0;
    double err = 0.0;
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const double m = 0.5 * (it.a + it.b);
        const double lm = 0.5 * (it.a + m), rm = 0.5 * (m + it.b);
        const double flm = f(lm), frm = f(rm);
        const double sl = simpson(it.fa, flm, it.fm, m - it.a);
        const double sr = simpson(it.fm, frm, it.fb, it.b - m);
        const double diff = sl + sr - it.s;
        const double eps = eps0 * std::ldexp(1.0, -it.depth);
        if (std::abs(diff) <= 15.0 * eps || m - it.a < 1e-15) {
            done += sl + sr + diff / 15.0;
            err += std::abs(diff) / 15.0;
            continue;
        }
        if (it.depth + 1 > cfg.max_depth) {
            double pending = sl + sr;
            for (const Item& rest : stack) pending += rest.s;
            throw QuadratureError("quadrature did not converge within max_depth",
                                  done + pending);
        }
        stack.push_back({it.a, m, it.fa, flm, it.fm, sl, it.depth + 1});
        stack.push_back({m, it.b, it.fm, frm, it.fb, sr, it.depth + 1});
    }
    err_out += err;
    return done;
}

// One unrefined Simpson pass, used to estimate segments the adaptive pass
// never reached when assembling a partial value for a QuadratureError.
template <class F>
double crude_simpson(F&& f, double a, double b) {
    return simpson(f(a), f(0.5 * (a + b)), f(b), b - a);
}

} // namespace

FunctionalResult eval_J_detailed(const PiecewiseLinear& u, const ExponentSpec& p,
                                 const QuadratureConfig& cfg) {
    check_config(cfg);
    const auto* cp = p.get_if<ExponentSpec::Constant>();
    FunctionalResult res;
    const auto segs = u.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& seg = segs[k];
        const double len = seg.x_hi - seg.x_lo;
        if (seg.slope == 0.0) {
            res.zero_slope_measure += len;
            continue;
        }
        const double ab = std::abs(seg.slope);
        if (cp) {
            res.value += std::pow(ab, cp->p0) * len;
            continue;
        }
        auto f = [&](double x) { return std::exp(p.p(x) * std::log(ab)); };
        try {
            res.value += adaptive_simpson(f, seg.x_lo, seg.x_hi, cfg, res.est_error);
        } catch (const QuadratureError& e) {
            double total = res.value + e.partial_value();
            for (std::size_t j = k + 1; j < segs.size(); ++j) {
                const auto& rest = segs[j];
                if (rest.slope == 0.0) continue;
                const double rab = std::abs(rest.slope);
                auto g = [&](double x) { return std::exp(p.p(x) * std::log(rab)); };
                total += crude_simpson(g, rest.x_lo, rest.x_hi);
            }
            throw QuadratureError(e.what(), total);
        }
    }
    return res;
}

FunctionalResult eval_I_detailed(const PiecewiseLinear& u, const ExponentSpec& p,
                                 const QuadratureConfig& cfg) {
    check_config(cfg);
    const auto* cp = p.get_if<ExponentSpec::Constant>();
    FunctionalResult res;
    const auto segs = u.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& seg = segs[k];
        const double len = seg.x_hi - seg.x_lo;
        if (seg.slope == 0.0) {
            res.zero_slope_measure += len;
            res.value += len;
            continue;
        }
        const double lsq = log1p_sq(seg.slope);
        if (cp) {
            res.value += std::exp(0.5 * cp->p0 * lsq) * len;
            continue;
        }
        auto f = [&](double x) { return std::exp(0.5 * p.p(x) * lsq); };
        try {
            res.value += adaptive_simpson(f, seg.x_lo, seg.x_hi, cfg, res.est_error);
        } catch (const QuadratureError& e) {
            double total = res.value + e.partial_value();
            for (std::size_t j = k + 1; j < segs.size(); ++j) {
                const auto& rest = segs[j];
                const double rlen = rest.x_hi - rest.x_lo;
                if (rest.slope == 0.0) {
                    total += rlen;
                    continue;
                }
                const double rsq = log1p_sq(rest.slope);
                auto g = [&](double x) { return std::exp(0.5 * p.p(x) * rsq); };
                total += crude_simpson(g, rest.x_lo, rest.x_hi);
            }
            throw QuadratureError(e.what(), total);
        }
    }
    return res;
}

double eval_J(const PiecewiseLinear& u, const ExponentSpec& p, const QuadratureConfig& cfg) {
    return eval_J_detailed(u, p, cfg).value;
}

double eval_I(const PiecewiseLinear& u, const ExponentSpec& p, const QuadratureConfig& cfg) {
    return eval_I_detailed(u, p, cfg).value;
}

namespace {

void check_s(double s, const char* who) {
    if (!(s > 0.0)) throw std::domain_error(std::string(who) + ": argument must be > 0");
    if (s < 1e-300) throw std::domain_error(std::string(who) + ": argument below 1e-300");
}

} // namespace

double eval_K(double s, double x, const ExponentSpec& p) {
    check_s(s, "eval_K");
    const double pv = p.p(x);
    if (s >= 1.0) return s * std::exp(0.5 * pv * std::log1p(1.0 / (s * s)));
    return std::exp((1.0 - pv) * std::log(s) + 0.5 * pv * std::log1p(s * s));
}

double eval_M(double s, double x, const ExponentSpec& p) {
    check_s(s, "eval_M");
    const double pv = p.p(x);
    if (s >= 1.0) return s * std::expm1(0.5 * pv * std::log1p(1.0 / (s * s)));
    return eval_K(s, x, p) - s;
}

double eval_Kcal(double c, double d, double y, const ExponentSpec& p) {
    check_s(c, "eval_Kcal");
    const double pv = p.p(y);
    const double dd = d * d;
    if (c * c >= 1.0 + dd) return c * std::exp(0.5 * pv * std::log1p((1.0 + dd) / (c * c)));
    return std::exp((1.0 - pv) * std::log(c) + 0.5 * pv * std::log1p(c * c + dd));
}

} // namespace psz
