// Extended-precision interval on MPFR endpoints (106-bit, double-word
// precision) with directed rounding.  Used by the certification engine as a
// fallback on cells whose double-precision enclosure is too wide; every
// operation rounds the lower endpoint toward -inf and the upper toward +inf,
// so enclosures are exact-by-construction rather than ulp-stepped.

#pragma once

#include <mpfr.h>

#include <string>

#include "psz/interval.hpp"

namespace psz {

class WideInterval {
public:
    static constexpr mpfr_prec_t kPrec = 106;

    WideInterval() { init(0.0, 0.0); }
    explicit WideInterval(double v) { init(v, v); }
    WideInterval(double lo, double hi) {
        if (lo > hi) throw IntervalError("interval endpoints out of order");
        init(lo, hi);
    }
    explicit WideInterval(const Interval& iv) { init(iv.lo(), iv.hi()); }

    WideInterval(const WideInterval& o) {
        mpfr_init2(lo_, kPrec);
        mpfr_init2(hi_, kPrec);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    WideInterval& operator=(const WideInterval& o) {
        if (this != &o) {
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~WideInterval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    // Narrowing back to a double interval, outward.
    Interval to_interval() const {
        return Interval(mpfr_get_d(lo_, MPFR_RNDD), mpfr_get_d(hi_, MPFR_RNDU));
    }
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    bool contains(double x) const {
        return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
    }

    friend WideInterval operator+(const WideInterval& a, const WideInterval& b) {
        WideInterval r;
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend WideInterval operator-(const WideInterval& a, const WideInterval& b) {
        WideInterval r;
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend WideInterval operator*(const WideInterval& a, const WideInterval& b) {
        mpfr_t c[4];
        for (auto& x : c) mpfr_init2(x, kPrec);
        mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDD);
        mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDD);
        mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDD);
        WideInterval r;
        mpfr_set(r.lo_, c[0], MPFR_RNDD);
        for (int i = 1; i < 4; ++i)
            if (mpfr_cmp(c[i], r.lo_) < 0) mpfr_set(r.lo_, c[i], MPFR_RNDD);
        mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDU);
        mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDU);
        mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDU);
        mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDU);
        mpfr_set(r.hi_, c[0], MPFR_RNDU);
        for (int i = 1; i < 4; ++i)
            if (mpfr_cmp(c[i], r.hi_) > 0) mpfr_set(r.hi_, c[i], MPFR_RNDU);
        for (auto& x : c) mpfr_clear(x);
        return r;
    }
    friend WideInterval operator/(const WideInterval& a, const WideInterval& b) {
        if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0)
            throw IntervalError("division by an interval containing zero");
        mpfr_t c[4];
        for (auto& x : c) mpfr_init2(x, kPrec);
        mpfr_div(c[0], a.lo_, b.lo_, MPFR_RNDD);
        mpfr_div(c[1], a.lo_, b.hi_, MPFR_RNDD);
        mpfr_div(c[2], a.hi_, b.lo_, MPFR_RNDD);
        mpfr_div(c[3], a.hi_, b.hi_, MPFR_RNDD);
        WideInterval r;
        mpfr_set(r.lo_, c[0], MPFR_RNDD);
        for (int i = 1; i < 4; ++i)
            if (mpfr_cmp(c[i], r.lo_) < 0) mpfr_set(r.lo_, c[i], MPFR_RNDD);
        mpfr_div(c[0], a.lo_, b.lo_, MPFR_RNDU);
        mpfr_div(c[1], a.lo_, b.hi_, MPFR_RNDU);
        mpfr_div(c[2], a.hi_, b.lo_, MPFR_RNDU);
        mpfr_div(c[3], a.hi_, b.hi_, MPFR_RNDU);
        mpfr_set(r.hi_, c[0], MPFR_RNDU);
        for (int i = 1; i < 4; ++i)
            if (mpfr_cmp(c[i], r.hi_) > 0) mpfr_set(r.hi_, c[i], MPFR_RNDU);
        for (auto& x : c) mpfr_clear(x);
        return r;
    }

    friend WideInterval log1p_w(const WideInterval& a) {
        if (mpfr_sgn(a.lo_) < 0) throw IntervalError("log1p argument reaches below zero");
        WideInterval r;
        mpfr_log1p(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_log1p(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }

private:
    void init(double lo, double hi) {
        mpfr_init2(lo_, kPrec);
        mpfr_init2(hi_, kPrec);
        mpfr_set_d(lo_, lo, MPFR_RNDD);
        mpfr_set_d(hi_, hi, MPFR_RNDU);
    }
    mpfr_t lo_, hi_;
};

} // namespace psz
