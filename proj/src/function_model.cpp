#include "psz/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

// pchip.hpp calls isnan unqualified; make the std overload visible to it.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

namespace psz {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values)
    : bp_(std::move(breakpoints)), val_(std::move(values)) {
    require(bp_.size() == val_.size(), "PiecewiseLinear: breakpoint/value count mismatch");
    require(bp_.size() >= 2, "PiecewiseLinear: need at least two breakpoints");
    require(bp_.front() == -1.0 && bp_.back() == 1.0,
            "PiecewiseLinear: domain must be exactly [-1,1]");
    for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
        require(bp_[i] < bp_[i + 1], "PiecewiseLinear: breakpoints must be strictly increasing");
    require(val_.front() == 0.0 && val_.back() == 0.0,
            "PiecewiseLinear: boundary values must vanish");
    for (double v : val_)
        require(std::isfinite(v) && v >= 0.0, "PiecewiseLinear: values must be finite and >= 0");
}

double PiecewiseLinear::max_value() const {
    return *std::max_element(val_.begin(), val_.end());
}

std::vector<Segment> PiecewiseLinear::segments() const {
    std::vector<Segment> out;
    out.reserve(bp_.size() - 1);
    for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
        Segment s;
        s.x_lo = bp_[i];
        s.x_hi = bp_[i + 1];
        s.intercept = val_[i];
        s.v_hi = val_[i + 1];
        s.slope = (val_[i + 1] - val_[i]) / (bp_[i + 1] - bp_[i]);
        out.push_back(s);
    }
    return out;
}

double eval_u(const PiecewiseLinear& u, double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("eval_u: x outside [-1,1]");
    const auto& bp = u.breakpoints();
    const auto& val = u.values();
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - bp.begin());
    if (hi == bp.size()) hi = bp.size() - 1; // x == 1 lands past the end
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double th = (x - bp[lo]) / (bp[hi] - bp[lo]);
    return val[lo] * (1.0 - th) + val[hi] * th;
}

PiecewiseLinear make_hat(double x0, double alpha, double eps) {
    require(alpha > 0.0 && eps > 0.0, "make_hat: alpha and eps must be positive");
    require(x0 - eps > -1.0 && x0 + eps < 1.0, "make_hat: support exits [-1,1]");
    return PiecewiseLinear({-1.0, x0 - eps, x0, x0 + eps, 1.0},
                           {0.0, 0.0, alpha * eps, 0.0, 0.0});
}

PiecewiseLinear make_double_ramp(double x1, double x2, double s, double t, double eps) {
    require(s > 0.0 && t > 0.0 && eps > 0.0, "make_double_ramp: s, t, eps must be positive");
    require(-1.0 < x1 && x1 < x2 && x2 < 1.0, "make_double_ramp: need -1 < x1 < x2 < 1");
    const double a0 = x1 - s * eps, a1 = x1 + s * eps;
    const double b0 = x2 - t * eps, b1 = x2 + t * eps;
    require(a0 > -1.0 && b1 < 1.0, "make_double_ramp: ramp bands exit (-1,1)");
    require(a1 < b0, "make_double_ramp: ramp bands overlap");
    const double h = 2.0 * eps;
    return PiecewiseLinear({-1.0, a0, a1, b0, b1, 1.0}, {0.0, 0.0, h, h, 0.0, 0.0});
}

ExponentSpec ExponentSpec::constant(double p0) {
    ExponentSpec spec(Impl{Constant{p0}});
    spec.validate();
    return spec;
}

ExponentSpec ExponentSpec::quadratic(double a, double b) {
    ExponentSpec spec(Impl{Quadratic{a, b}});
    spec.validate();
    return spec;
}

ExponentSpec ExponentSpec::powerwell(double a, double b, double gamma) {
    ExponentSpec spec(Impl{PowerWell{a, b, gamma}});
    spec.validate();
    return spec;
}

ExponentSpec ExponentSpec::affine(double a, double b) {
    ExponentSpec spec(Impl{Affine{a, b}});
    spec.validate();
    return spec;
}

ExponentSpec ExponentSpec::table(std::vector<double> breakpoints, std::vector<double> samples) {
    require(breakpoints.size() == samples.size(), "ExponentSpec::table: size mismatch");
    require(breakpoints.size() >= 4, "ExponentSpec::table: need at least four samples");
    require(breakpoints.front() == -1.0 && breakpoints.back() == 1.0,
            "ExponentSpec::table: breakpoints must span [-1,1]");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        require(breakpoints[i] < breakpoints[i + 1],
                "ExponentSpec::table: breakpoints must be strictly increasing");

    Table tab;
    tab.breakpoints = breakpoints;
    tab.samples = samples;
    tab.interp = std::make_shared<const Pchip>(std::move(breakpoints), std::move(samples));
    ExponentSpec spec(Impl{std::move(tab)});
    spec.validate();
    return spec;
}

void ExponentSpec::validate() const {
    // p(x) >= 1 is required everywhere; check by dense sampling.
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double x = -1.0 + 2.0 * i / n;
        const double p = eval(x).p;
        if (!std::isfinite(p) || p < 1.0)
            throw std::invalid_argument("ExponentSpec: p(x) must be finite and >= 1 on [-1,1]");
    }
}

ExponentValues ExponentSpec::eval(double x) const {
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("ExponentSpec::eval: x outside [-1,1]");
    ExponentValues out;
    if (const auto* c = std::get_if<Constant>(&impl_)) {
        out.p = c->p0;
        out.q1 = 0.0;
        out.q2 = 0.0;
    } else if (const auto* q = std::get_if<Quadratic>(&impl_)) {
        out.p = q->a + q->b * x * x;
        out.q1 = 2.0 * q->b * x;
        out.q2 = 2.0 * q->b;
    } else if (const auto* w = std::get_if<PowerWell>(&impl_)) {
        const double g = w->a + w->b * x * x;
        const double gp = 2.0 * w->b * x;
        const double gpp = 2.0 * w->b;
        out.p = 1.0 + std::pow(g, w->gamma);
        out.q1 = (gp == 0.0) ? 0.0 : w->gamma * std::pow(g, w->gamma - 1.0) * gp;
        const double curv = w->gamma * std::pow(g, w->gamma - 1.0) * gpp;
        const double sq = (gp == 0.0)
                              ? 0.0
                              : w->gamma * (w->gamma - 1.0) * std::pow(g, w->gamma - 2.0) * gp * gp;
        out.q2 = sq + curv;
    } else if (const auto* a = std::get_if<Affine>(&impl_)) {
        out.p = a->a + a->b * x;
        out.q1 = a->b;
        out.q2 = 0.0;
    } else {
        const auto& tab = std::get<Table>(impl_);
        const auto& f = *static_cast<const Pchip*>(tab.interp.get());
        const double h = 1e-5;
        // Shift the difference stencil inward so it never leaves [-1,1].
        const double xc = std::clamp(x, -1.0 + h, 1.0 - h);
        const double fm = f(xc - h), f0 = f(xc), fp = f(xc + h);
        out.p = f(x);
        out.q1 = (fp - fm) / (2.0 * h);
        out.q2 = (fp - 2.0 * f0 + fm) / (h * h);
    }
    out.q = out.p - 1.0;
    return out;
}

double ExponentSpec::p(double x) const {
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("ExponentSpec::eval: x outside [-1,1]");
    if (const auto* c = std::get_if<Constant>(&impl_)) return c->p0;
    if (const auto* q = std::get_if<Quadratic>(&impl_)) return q->a + q->b * x * x;
    if (const auto* w = std::get_if<PowerWell>(&impl_))
        return 1.0 + std::pow(w->a + w->b * x * x, w->gamma);
    if (const auto* a = std::get_if<Affine>(&impl_)) return a->a + a->b * x;
    const auto& tab = std::get<Table>(impl_);
    return (*static_cast<const Pchip*>(tab.interp.get()))(x);
}

std::string ExponentSpec::kind() const {
    if (std::holds_alternative<Constant>(impl_)) return "constant";
    if (std::holds_alternative<Quadratic>(impl_)) return "quadratic";
    if (std::holds_alternative<PowerWell>(impl_)) return "powerwell";
    if (std::holds_alternative<Affine>(impl_)) return "affine";
    return "table";
}

} // namespace psz
