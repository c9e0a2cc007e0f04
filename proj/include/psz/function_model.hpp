// Test-function and exponent-field representations: nonnegative piecewise
// linear u on [-1,1] vanishing at the endpoints, and the variable exponent
// p(x) >= 1 with derivative access to q = p-1.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace psz {

// One linear piece of a PiecewiseLinear.  intercept is the value at x_lo;
// v_hi is kept so endpoint evaluation reproduces the parent values exactly.
struct Segment {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double v_hi = 0.0;

    double value_at(double x) const {
        const double th = (x - x_lo) / (x_hi - x_lo);
        return intercept * (1.0 - th) + v_hi * th;
    }
};

class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<double>& values() const { return val_; }
    double max_value() const;
    std::vector<Segment> segments() const;

private:
    std::vector<double> bp_;
    std::vector<double> val_;
};

double eval_u(const PiecewiseLinear& u, double x);

// Tent of height alpha*eps at x0, supported on [x0-eps, x0+eps].
PiecewiseLinear make_hat(double x0, double alpha, double eps);

// Ramp of slope 1/s up at x1, plateau at height 2*eps, ramp of slope 1/t
// down at x2.
PiecewiseLinear make_double_ramp(double x1, double x2, double s, double t, double eps);

struct ExponentValues {
    double p = 0.0;
    double q = 0.0;  // p - 1
    double q1 = 0.0; // q'
    double q2 = 0.0; // q''
};

class ExponentSpec {
public:
    struct Constant {
        double p0;
    };
    struct Quadratic {
        double a, b; // p(x) = a + b*x^2
    };
    struct PowerWell {
        double a, b, gamma; // p(x) = 1 + (a + b*x^2)^gamma
    };
    struct Affine {
        double a, b; // p(x) = a + b*x
    };
    struct Table {
        std::vector<double> breakpoints;
        std::vector<double> samples;
        std::shared_ptr<const void> interp; // boost pchip, type-erased
    };

    static ExponentSpec constant(double p0);
    static ExponentSpec quadratic(double a, double b);
    static ExponentSpec powerwell(double a, double b, double gamma);
    static ExponentSpec affine(double a, double b);
    static ExponentSpec table(std::vector<double> breakpoints, std::vector<double> samples);

    ExponentValues eval(double x) const;
    double p(double x) const; // value only, cheaper than eval for Table
    std::string kind() const;

    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&impl_);
    }

private:
    using Impl = std::variant<Constant, Quadratic, PowerWell, Affine, Table>;
    explicit ExponentSpec(Impl impl) : impl_(std::move(impl)) {}
    void validate() const; // p >= 1 by dense sampling, step 1e-4
    Impl impl_;
};

inline ExponentValues exponent_eval(const ExponentSpec& p, double x) { return p.eval(x); }

} // namespace psz
