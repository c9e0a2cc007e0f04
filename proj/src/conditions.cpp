#include "psz/conditions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "psz/functionals.hpp"

namespace psz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double A_inf(double w) {
    if (w < 1e-4)
        return 0.5 + w * (0.25 + w * (-0.25 + w * (5.0 / 24.0 - w * (7.0 / 40.0))));
    const double L = std::log1p(w);
    return 2.0 - 0.5 * (L + 3.0 * (L / w));
}

double A_series(double w, double q) {
    const double a1 = q + 0.5;
    const double a2 = 0.5 * (q + 1.0);
    const double a3 = -(0.5 * q + 5.0 / 12.0);
    const double a4 = (5.0 / 12.0) * q + 31.0 / 90.0;
    const double num = 1.0 + w * (a1 + w * (a2 + w * (a3 + w * a4)));
    return q * num / (2.0 * (q * w + 1.0) * (q + 1.0));
}

double A_direct(double w, double q) {
    const double L = std::log1p(w);
    const double S1 = 4.0 * w - (w + 3.0) * L;
    const double S2 = (1.0 - w) * (L / w) + 4.0 * (w / L) - 4.0;
    return q * (q * S1 + S2) / (2.0 * (q * w + 1.0) * (q + 1.0));
}

} // namespace

double det_K_hessian(double w, double q, double q1, double q2) {
    if (!(w > 0.0)) throw std::domain_error("det_K_hessian: w must be > 0");
    const double L = std::log1p(w);
    const double lead = 0.25 * std::pow(1.0 + w, q - 1.0);
    const double curv = w * (w * q + 1.0) * (q + 1.0) * L * (q1 * q1 * L + 2.0 * q2);
    const double cross = (1.0 - q * w) * L - 2.0 * w;
    return lead * (curv - q1 * q1 * cross * cross);
}

double A_value(double w, double q) {
    if (!(w >= 0.0)) throw std::domain_error("A_value: w must be >= 0");
    if (!(q >= 0.0)) throw std::domain_error("A_value: q must be >= 0");
    if (std::isinf(q)) return A_inf(w);
    if (w < 1e-4) return A_series(w, q);
    return A_direct(w, q);
}

ScriptAResult script_A_detailed(double q) {
    if (!(q >= 0.0)) throw std::domain_error("script_A: q must be >= 0");
    constexpr int n_scan = 400;
    double best = -kInf;
    int best_i = 0;
    std::vector<double> ws(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        ws[i] = std::pow(10.0, -4.0 + 8.0 * i / (n_scan - 1));
        const double a = A_value(ws[i], q);
        if (a > best) {
            best = a;
            best_i = i;
        }
    }

    double lo = ws[best_i > 0 ? best_i - 1 : 0];
    double hi = ws[best_i < n_scan - 1 ? best_i + 1 : n_scan - 1];
    constexpr double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = A_value(x1, q), f2 = A_value(x2, q);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = A_value(x2, q);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = A_value(x1, q);
        }
    }
    const double w_at = 0.5 * (lo + hi);
    return {std::max(best, A_value(w_at, q)), w_at};
}

double script_A(double q) { return script_A_detailed(q).value; }

ConditionVerdict check_even(const ExponentSpec& p, double tol) {
    double worst = 0.0, worst_x = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = i * 1e-3;
        const double dev = std::abs(p.p(x) - p.p(-x));
        if (dev > worst) {
            worst = dev;
            worst_x = x;
        }
    }
    ConditionVerdict v;
    v.margin = -worst;
    v.passed = v.margin >= -tol;
    if (!v.passed) v.witness = std::vector<double>{worst_x};
    return v;
}

ConditionVerdict check_power_convex(const ExponentSpec& p, double M, double mesh,
                                    double tol) {
    if (!(M > 0.0 && M < 1.0))
        throw std::invalid_argument("check_power_convex: M must lie in (0, 1)");
    if (!(mesh > 0.0)) throw std::invalid_argument("check_power_convex: mesh must be > 0");
    const int n = std::max<int>(2, static_cast<int>(std::llround(2.0 / mesh)));
    std::vector<double> x(n + 1), g(n + 1);
    for (int i = 0; i <= n; ++i) {
        x[i] = -1.0 + 2.0 * i / n;
        const double q = p.p(x[i]) - 1.0;
        if (q < 0.0) throw std::domain_error("check_power_convex: p - 1 negative on the mesh");
        g[i] = std::pow(q, 1.0 - M);
    }

    ConditionVerdict v;
    v.margin = kInf;
    double wa = 0.0, wb = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 2; j <= n; j += 2) {
            const int m = (i + j) / 2;
            const double slack = 0.5 * (g[i] + g[j]) - g[m];
            if (slack < v.margin) {
                v.margin = slack;
                wa = x[i];
                wb = x[j];
            }
        }
    }
    v.passed = v.margin >= -tol;
    if (!v.passed) v.witness = std::vector<double>{wa, wb};
    return v;
}

namespace {

ConditionVerdict merge_verdicts(std::initializer_list<ConditionVerdict> parts) {
    ConditionVerdict out;
    out.passed = true;
    out.margin = kInf;
    for (const auto& v : parts) {
        out.passed = out.passed && v.passed;
        if (v.margin < out.margin) {
            out.margin = v.margin;
            out.witness = v.witness;
        }
    }
    if (out.passed) out.witness.reset();
    return out;
}

ConditionVerdict check_cap(const ExponentSpec& p, double cap) {
    double pmax = -kInf, at = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -1.0 + i * 1e-3;
        const double pv = p.p(x);
        if (pv > pmax) {
            pmax = pv;
            at = x;
        }
    }
    ConditionVerdict v;
    v.margin = cap - pmax;
    v.passed = v.margin >= 0.0;
    if (!v.passed) v.witness = std::vector<double>{at};
    return v;
}

} // namespace

Thm4Verdict check_sufficient_thm4(const ExponentSpec& p) {
    const ConditionVerdict even = check_even(p, 1e-9);
    Thm4Verdict out;
    out.part1 = merge_verdicts({even, check_power_convex(p, 0.63, 1e-2, 1e-9)});
    out.part2 = merge_verdicts(
        {even, check_cap(p, 2.36), check_power_convex(p, 0.5, 1e-2, 1e-9)});
    return out;
}

ConditionVerdict check_joint_convexity_K(const ExponentSpec& p, int n_w, int n_x,
                                         double tol) {
    if (n_w < 2 || n_x < 2)
        throw std::invalid_argument("check_joint_convexity_K: mesh counts must be >= 2");

    std::vector<ExponentValues> ev(n_x);
    std::vector<double> xs(n_x);
    for (int j = 0; j < n_x; ++j) {
        xs[j] = -1.0 + 2.0 * j / (n_x - 1);
        ev[j] = p.eval(xs[j]);
    }

    ConditionVerdict v;
    v.margin = kInf;
    double ww = 0.0, wx = 0.0;
    for (int i = 0; i < n_w; ++i) {
        const double w = std::pow(10.0, -4.0 + 8.0 * i / (n_w - 1));
        for (int j = 0; j < n_x; ++j) {
            const double det = det_K_hessian(w, ev[j].q, ev[j].q1, ev[j].q2);
            if (det < v.margin) {
                v.margin = det;
                ww = w;
                wx = xs[j];
            }
        }
    }
    v.passed = v.margin >= -tol;

    // K must be strictly convex in s alone for the determinant sign to decide
    // joint convexity; spot-check that with a second difference.
    for (double w : {1e-2, 1.0, 1e2}) {
        const double s = 1.0 / std::sqrt(w);
        for (double x : {-0.51, 0.0, 0.49}) {
            const double h = 1e-4 * s;
            const double dd =
                eval_K(s + h, x, p) - 2.0 * eval_K(s, x, p) + eval_K(s - h, x, p);
            if (!(dd > 0.0)) {
                v.passed = false;
                if (dd / (h * h) < v.margin) {
                    v.margin = dd / (h * h);
                    ww = w;
                    wx = x;
                }
            }
        }
    }
    if (!v.passed) v.witness = std::vector<double>{ww, wx};
    return v;
}

double det_Kcal_hessian(double c, double d, double y, const ExponentSpec& p) {
    if (!(c > 0.0)) throw std::domain_error("det_Kcal_hessian: c must be > 0");
    const double root = std::sqrt(1.0 + d * d);
    const double s = c / root;
    const ExponentValues ev = p.eval(y);
    const double q = ev.q, q1 = ev.q1, q2 = ev.q2;

    const double K = eval_K(s, y, p);
    const double w = 1.0 / (s * s);
    const double L = std::log1p(w);
    const double om = 1.0 + w;
    const double Kss = K * (q + 1.0) * w * (q * w + 1.0) / (s * s * om * om);
    const double Ky = K * (0.5 * q1 * L);
    const double Kyy = K * (0.25 * q1 * q1 * L * L + 0.5 * q2 * L);
    const double Ksy = (K / s) * q1 * ((1.0 - q * w) * L - 2.0 * w) / (2.0 * om);
    const double K_minus_sKs = K * w * (q + 1.0) / om;

    const double bracket =
        (Kyy * Kss - Ksy * Ksy) * K_minus_sKs - Kss * Ky * Ky * (d * d);
    return bracket / (root * root * root);
}

std::optional<double> kcal_negativity_probe(const ExponentSpec& p, double y, double c) {
    if (!(c > 0.0)) throw std::domain_error("kcal_negativity_probe: c must be > 0");
    for (double d = 1.0; d <= 1e6; d *= 2.0) {
        if (det_Kcal_hessian(c, d, y, p) < 0.0) return d;
    }
    return std::nullopt;
}

} // namespace psz
