#ifndef PSZ_CONDITIONS_HPP
#define PSZ_CONDITIONS_HPP

#include <optional>
#include <vector>

#include "psz/function_model.hpp"

namespace psz {

// Outcome of a sampled differential condition. `margin` is the signed slack
// at the worst sampled point (negative means violated there); `witness`
// holds that point's coordinates when the check fails.
struct ConditionVerdict {
    bool passed = false;
    std::optional<std::vector<double>> witness;
    double margin = 0.0;
};

// Hessian determinant of (s, x) -> K(s, x) expressed in w = 1/s^2 and the
// local exponent data q = p - 1, q1 = p', q2 = p''.
double det_K_hessian(double w, double q, double q1, double q2);

// The comparison quantity A(w, q); q may be +infinity (closed limit form).
// Near w = 0 the direct formula cancels badly, so a short series takes over
// below w = 1e-4.
double A_value(double w, double q);

struct ScriptAResult {
    double value = 0.0;
    double w_at = 0.0;
};

// sup over w > 0 of A(w, q): coarse log-spaced scan, then golden-section
// refinement of the best bracket to w-tolerance 1e-10.
ScriptAResult script_A_detailed(double q);
double script_A(double q);

// Symmetry screen: max |p(x) - p(-x)| over a 1e-3 grid on [0, 1].
ConditionVerdict check_even(const ExponentSpec& p, double tol);

// Midpoint-convexity screen for g = (p - 1)^(1 - M) on a uniform mesh over
// [-1, 1]; only pairs whose midpoint is itself a mesh point are tested.
ConditionVerdict check_power_convex(const ExponentSpec& p, double M, double mesh,
                                    double tol = 1e-12);

struct Thm4Verdict {
    ConditionVerdict part1;
    ConditionVerdict part2;
};

// Two sufficient conditions for the rearrangement inequality: evenness plus
// (p-1)^0.37 convex, or evenness plus p <= 2.36 plus sqrt(p-1) convex.
Thm4Verdict check_sufficient_thm4(const ExponentSpec& p);

// Mesh scan of det_K_hessian over log-spaced w in [1e-4, 1e4] and uniform
// x in [-1, 1], with a finite-difference spot check that K is strictly
// convex in s alone.
ConditionVerdict check_joint_convexity_K(const ExponentSpec& p, int n_w = 200,
                                         int n_x = 201, double tol = 1e-9);

// Hessian determinant of the tilted kernel (c, d, y) -> Kcal(c, d, y),
// assembled from analytic K-partials at s = c / sqrt(1 + d^2).
double det_Kcal_hessian(double c, double d, double y, const ExponentSpec& p);

// Doubling search d = 1, 2, 4, ... <= 1e6 for the first d that makes the
// tilted kernel's Hessian determinant negative.
std::optional<double> kcal_negativity_probe(const ExponentSpec& p, double y, double c);

} // namespace psz

#endif
