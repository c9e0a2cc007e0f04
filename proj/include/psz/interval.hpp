// Closed-interval arithmetic on double endpoints with outward rounding.
//
// Rounding discipline: every arithmetic operation computes endpoints in
// round-to-nearest and steps them one unit-in-last-place outward unless
// the result is provably exact (TwoSum / fma residual tests), so exact
// arithmetic stays exact.  Transcendental functions (log1p, exp, expm1)
// step two ulps to cover libm implementations that are not correctly
// rounded (documented glibc maximum errors are at most 1-2 ulp for these
// entry points).  This is portable and needs no rounding-mode switching.
//
// Infinite endpoints are supported.  The multiplication convention
// 0 * inf = 0 applies to endpoint products (correct for set-valued
// products of closed intervals).  Division by an interval containing
// zero throws IntervalError; it is never silently widened.

#pragma once

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace psz {

class IntervalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace rnd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Next representable double toward +inf (identity on +inf).
inline double up(double x) {
    if (x != x) throw IntervalError("interval endpoint is NaN");
    if (x == kInf) return x;
    if (x == 0.0) return std::numeric_limits<double>::denorm_min();
    auto b = std::bit_cast<std::uint64_t>(x);
    b += (x > 0.0) ? 1 : std::uint64_t(-1);
    return std::bit_cast<double>(b);
}

// Next representable double toward -inf (identity on -inf).
inline double down(double x) {
    if (x != x) throw IntervalError("interval endpoint is NaN");
    if (x == -kInf) return x;
    if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
    auto b = std::bit_cast<std::uint64_t>(x);
    b += (x > 0.0) ? std::uint64_t(-1) : 1;
    return std::bit_cast<double>(b);
}

inline double up2(double x) { return up(up(x)); }
inline double down2(double x) { return down(down(x)); }

} // namespace rnd

namespace detail {

// Endpoint sums/products step outward only when inexact, so arithmetic on
// exactly representable values stays exact.  Exactness tests: TwoSum residual
// for +, fma residual for * and / (reliable only for normal results, hence
// the DBL_MIN guard; subnormal results are always stepped).

inline bool sum_exact(double x, double y, double s) {
    if (!std::isfinite(s)) return false;
    const double bp = s - x;
    return (x - (s - bp)) + (y - bp) == 0.0;
}

inline double add_dn(double x, double y) {
    const double s = x + y;
    return sum_exact(x, y, s) ? s : rnd::down(s);
}

inline double add_up(double x, double y) {
    const double s = x + y;
    return sum_exact(x, y, s) ? s : rnd::up(s);
}

// Endpoint product candidate with the 0 * inf = 0 convention (correct for
// set-valued products of closed intervals).
inline void mul_cand(double x, double y, double& p, bool& exact) {
    if (x == 0.0 || y == 0.0) {
        p = 0.0;
        exact = true;
        return;
    }
    p = x * y;
    exact = std::fabs(p) >= DBL_MIN && std::fma(x, y, -p) == 0.0;
}

inline void div_cand(double x, double y, double& q, bool& exact) {
    if (x == 0.0) {
        q = 0.0;
        exact = true;
        return;
    }
    q = x / y;
    exact = std::fabs(q) >= DBL_MIN && std::fma(q, y, -x) == 0.0;
}

} // namespace detail

class Interval {
public:
    Interval() : lo_(0.0), hi_(0.0) {}
    Interval(double v) : lo_(v), hi_(v) { check(); }
    Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    double width() const { return hi_ - lo_; }

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

    Interval operator-() const { return Interval(-hi_, -lo_); }

private:
    void check() const {
        if (lo_ != lo_ || hi_ != hi_) throw IntervalError("interval endpoint is NaN");
        if (lo_ > hi_) throw IntervalError("interval endpoints out of order");
    }
    double lo_, hi_;
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(detail::add_dn(a.lo(), b.lo()), detail::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return Interval(detail::add_dn(a.lo(), -b.hi()), detail::add_up(a.hi(), -b.lo()));
}

inline Interval operator*(const Interval& a, const Interval& b) {
    double p[4];
    bool e[4];
    detail::mul_cand(a.lo(), b.lo(), p[0], e[0]);
    detail::mul_cand(a.lo(), b.hi(), p[1], e[1]);
    detail::mul_cand(a.hi(), b.lo(), p[2], e[2]);
    detail::mul_cand(a.hi(), b.hi(), p[3], e[3]);
    const double lo = std::fmin(std::fmin(p[0], p[1]), std::fmin(p[2], p[3]));
    const double hi = std::fmax(std::fmax(p[0], p[1]), std::fmax(p[2], p[3]));
    bool lo_ex = false, hi_ex = false;
    for (int i = 0; i < 4; ++i) {
        lo_ex = lo_ex || (p[i] == lo && e[i]);
        hi_ex = hi_ex || (p[i] == hi && e[i]);
    }
    return Interval(lo_ex ? lo : rnd::down(lo), hi_ex ? hi : rnd::up(hi));
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo() <= 0.0 && 0.0 <= b.hi())
        throw IntervalError("division by an interval containing zero");
    double p[4];
    bool e[4];
    detail::div_cand(a.lo(), b.lo(), p[0], e[0]);
    detail::div_cand(a.lo(), b.hi(), p[1], e[1]);
    detail::div_cand(a.hi(), b.lo(), p[2], e[2]);
    detail::div_cand(a.hi(), b.hi(), p[3], e[3]);
    const double lo = std::fmin(std::fmin(p[0], p[1]), std::fmin(p[2], p[3]));
    const double hi = std::fmax(std::fmax(p[0], p[1]), std::fmax(p[2], p[3]));
    bool lo_ex = false, hi_ex = false;
    for (int i = 0; i < 4; ++i) {
        lo_ex = lo_ex || (p[i] == lo && e[i]);
        hi_ex = hi_ex || (p[i] == hi && e[i]);
    }
    return Interval(lo_ex ? lo : rnd::down(lo), hi_ex ? hi : rnd::up(hi));
}

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::fmin(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

// Intersection of two enclosures of the same quantity.  An empty result
// means at least one input was not a valid enclosure, so it throws.
inline Interval intersect(const Interval& a, const Interval& b) {
    const double lo = std::fmax(a.lo(), b.lo());
    const double hi = std::fmin(a.hi(), b.hi());
    if (lo > hi) throw IntervalError("empty intersection of enclosures");
    return Interval(lo, hi);
}

// Natural log; requires lo >= 0 (lo == 0 maps to a -inf endpoint).
inline Interval log_i(const Interval& a) {
    if (a.lo() < 0.0) throw IntervalError("log of an interval reaching below zero");
    const double lo = (a.lo() == 0.0) ? -rnd::kInf : rnd::down2(std::log(a.lo()));
    const double hi = (a.hi() == rnd::kInf) ? rnd::kInf : rnd::up2(std::log(a.hi()));
    return Interval(lo, hi);
}

// ln(1+a); requires a.lo >= 0 (all uses are on nonnegative arguments).
inline Interval log1p_i(const Interval& a) {
    if (a.lo() < 0.0) throw IntervalError("log1p argument reaches below zero");
    const double lo = (a.lo() == 0.0) ? 0.0 : rnd::down2(std::log1p(a.lo()));
    const double hi = (a.hi() == rnd::kInf) ? rnd::kInf : rnd::up2(std::log1p(a.hi()));
    return Interval(lo, hi);
}

inline Interval exp_i(const Interval& a) {
    const double lo = (a.lo() == -rnd::kInf) ? 0.0 : std::fmax(0.0, rnd::down2(std::exp(a.lo())));
    const double hi = (a.hi() == rnd::kInf) ? rnd::kInf : rnd::up2(std::exp(a.hi()));
    return Interval(lo, hi);
}

inline Interval expm1_i(const Interval& a) {
    const double lo = (a.lo() == -rnd::kInf) ? -1.0 : std::fmax(-1.0, rnd::down2(std::expm1(a.lo())));
    const double hi = (a.hi() == rnd::kInf) ? rnd::kInf : rnd::up2(std::expm1(a.hi()));
    return Interval(lo, hi);
}

// a^b for a with nonnegative lower endpoint, via exp(b * ln a).
inline Interval pow_i(const Interval& a, const Interval& b) {
    return exp_i(b * log_i(a));
}

inline Interval sqr_i(const Interval& a) {
    const Interval m = a * a;
    if (a.lo() <= 0.0 && 0.0 <= a.hi()) return Interval(0.0, m.hi());
    return Interval(std::fmax(0.0, m.lo()), m.hi());
}

// ---------------------------------------------------------------------------
// Limit-form primitives for the compactified charts.  Each is a monotone
// elementary ratio whose direct interval quotient would divide by zero on
// cells touching the w = 0 / v = 0 edge; monotonicity gives sound endpoint
// enclosures instead.  The monotonicity facts:
//   ln(1+w)/w decreasing on (0,inf) with limit 1 at 0
//       (h(w) = w/(1+w) - ln(1+w) has h(0) = 0, h'(w) = -w/(1+w)^2 <= 0,
//        so h <= 0, and (ln(1+w)/w)' = h(w)/w^2 <= 0);
//   w/ln(1+w) is its reciprocal, increasing with limit 1 at 0;
//   v*ln(1+1/v) increasing on (0,inf), limit 0 at v = 0, limit 1 at inf
//       (derivative ln(1+1/v) - 1/(1+v) > 0 since ln(1+u) > u/(1+u)).
// These facts are exercised against direct interval evaluation in the tests.
// ---------------------------------------------------------------------------

// ln(1+w)/w over w within [0, inf); value 1 at w = 0.
inline Interval ln1p_over(const Interval& w) {
    if (w.lo() < 0.0) throw IntervalError("ln1p_over domain is [0, inf)");
    double lo, hi;
    if (w.hi() == rnd::kInf) {
        lo = 0.0;
    } else if (w.hi() == 0.0) {
        lo = 1.0;
    } else {
        lo = rnd::down(rnd::down2(std::log1p(w.hi())) / w.hi());
    }
    if (w.lo() == 0.0) {
        hi = 1.0;
    } else {
        hi = std::fmin(1.0, rnd::up(rnd::up2(std::log1p(w.lo())) / w.lo()));
    }
    return Interval(std::fmin(lo, hi), hi);
}

// w/ln(1+w) over w within [0, inf); value 1 at w = 0.
inline Interval over_ln1p(const Interval& w) {
    if (w.lo() < 0.0) throw IntervalError("over_ln1p domain is [0, inf)");
    double lo, hi;
    if (w.lo() == 0.0) {
        lo = 1.0;
    } else {
        lo = std::fmax(1.0, rnd::down(w.lo() / rnd::up2(std::log1p(w.lo()))));
    }
    if (w.hi() == rnd::kInf) {
        hi = rnd::kInf;
    } else if (w.hi() == 0.0) {
        hi = 1.0;
    } else {
        hi = rnd::up(w.hi() / rnd::down2(std::log1p(w.hi())));
    }
    return Interval(std::fmin(lo, hi), std::fmax(lo, hi));
}

// ln(1 + 1/v) over v within [0, inf); decreasing, +inf endpoint at v = 0.
inline Interval ln1p_inv(const Interval& v) {
    if (v.lo() < 0.0) throw IntervalError("ln1p_inv domain is [0, inf)");
    const double lo = (v.hi() == rnd::kInf)
                          ? 0.0
                          : rnd::down2(std::log1p(rnd::down(1.0 / v.hi())));
    const double hi = (v.lo() == 0.0)
                          ? rnd::kInf
                          : rnd::up2(std::log1p(rnd::up(1.0 / v.lo())));
    return Interval(std::fmax(0.0, lo), hi);
}

// v*ln(1 + 1/v) over v within [0, inf); increasing, 0 at v = 0, sup 1.
inline Interval v_ln1p_inv(const Interval& v) {
    if (v.lo() < 0.0) throw IntervalError("v_ln1p_inv domain is [0, inf)");
    double lo, hi;
    if (v.lo() == 0.0) {
        lo = 0.0;
    } else {
        const double t = rnd::down(1.0 / v.lo());
        lo = rnd::down(v.lo() * rnd::down2(std::log1p(t)));
    }
    if (v.hi() == rnd::kInf) {
        hi = 1.0;
    } else if (v.hi() == 0.0) {
        hi = 0.0;
    } else {
        const double t = rnd::up(1.0 / v.hi());
        hi = std::fmin(1.0, rnd::up(v.hi() * rnd::up2(std::log1p(t))));
    }
    return Interval(std::fmax(0.0, lo), hi);
}

inline std::string to_string(const Interval& a) {
    return "[" + std::to_string(a.lo()) + ", " + std::to_string(a.hi()) + "]";
}

} // namespace psz
