// The gradient functionals J(u) and I(u) and the kernel functions K, M,
// and the tilted kernel used by the two-dimensional sections.

#pragma once

#include <stdexcept>
#include <string>

#include "psz/function_model.hpp"

namespace psz {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 40;
};

// Thrown when adaptive refinement hits max_depth; carries the best
// available estimate accumulated so far.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double partial)
        : std::runtime_error(what), partial_(partial) {}
    double partial_value() const { return partial_; }

private:
    double partial_;
};

struct FunctionalResult {
    double value = 0.0;
    double est_error = 0.0;
    double zero_slope_measure = 0.0;
};

// J(u) = int |u'|^{p(x)} dx.  Zero-slope segments contribute 0; constant
// exponents short-circuit to the closed form.
FunctionalResult eval_J_detailed(const PiecewiseLinear& u, const ExponentSpec& p,
                                 const QuadratureConfig& cfg = {});
double eval_J(const PiecewiseLinear& u, const ExponentSpec& p, const QuadratureConfig& cfg = {});

// I(u) = int (1 + u'^2)^{p(x)/2} dx.  Zero-slope segments contribute
// exactly their length.
FunctionalResult eval_I_detailed(const PiecewiseLinear& u, const ExponentSpec& p,
                                 const QuadratureConfig& cfg = {});
double eval_I(const PiecewiseLinear& u, const ExponentSpec& p, const QuadratureConfig& cfg = {});

// K(s, x) = s (1 + s^-2)^{p(x)/2}, in overflow-safe exp/log1p form.
double eval_K(double s, double x, const ExponentSpec& p);

// M(s, x) = K(s, x) - s, via expm1 so large s does not cancel.
double eval_M(double s, double x, const ExponentSpec& p);

// Tilted kernel c (1 + (1+d^2)/c^2)^{p(y)/2}, evaluated directly (not
// through its sqrt(1+d^2) * K identity, which is checked in tests).
double eval_Kcal(double c, double d, double y, const ExponentSpec& p);

} // namespace psz
