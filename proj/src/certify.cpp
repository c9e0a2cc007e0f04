#include "psz/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "psz/conditions.hpp"
#include "psz/wide_interval.hpp"

namespace psz {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

void check_nonneg(const Interval& c, const char* axis) {
    if (!(c.lo() >= 0.0))
        throw std::invalid_argument(std::string("chart coordinate ") + axis +
                                    " must be nonnegative");
}

// q/(q+1) is increasing, so its endpoint images bound the exact range.
Interval phi_of(const Interval& q) {
    const Interval lo(q.lo()), hi(q.hi());
    return hull(lo / (lo + 1.0), hi / (hi + 1.0));
}

// q/(q+v) is increasing in q and decreasing in v on the closed quadrant
// (it equals 1/(1 + v/q)), so opposite corners bound the exact range,
// clamped to [0,1].  The q = 0 edge gives 0 and the v = 0 edge gives 1,
// which sidesteps the 0/0 corner the plain quotient would hit.
Interval phi_split(const Interval& q, const Interval& v) {
    double lo = 0.0, hi = 1.0;
    if (q.lo() > 0.0)
        lo = std::max(0.0, (Interval(q.lo()) / (Interval(q.lo()) + v.hi())).lo());
    if (v.lo() > 0.0)
        hi = std::min(1.0, (Interval(q.hi()) / (Interval(q.hi()) + v.lo())).hi());
    return Interval(lo, std::max(lo, hi));
}

// Everything in the (w,q) chart that depends on w alone, computed once per
// mesh column: the tight ranges of the univariate factors and the endpoint
// values feeding the bivariate corner products.
struct WqCol {
    Interval w;
    Interval w_lo, w_hi;  // endpoints as point intervals
    Interval g_lo, g_hi;  // (w+3)ln(w+1) at the endpoints
    Interval L;           // ln(w+1)
    Interval Lw;          // ln(w+1)/w
    Interval wL;          // 4w/ln(w+1)
    Interval S1, S2;      // pieces of the direct form
};

WqCol make_wq_col(const Interval& w) {
    WqCol c;
    c.w = w;
    c.w_lo = Interval(w.lo());
    c.w_hi = Interval(w.hi());
    c.g_lo = (c.w_lo + 3.0) * log1p_i(c.w_lo);
    c.g_hi = (c.w_hi + 3.0) * log1p_i(c.w_hi);
    c.L = log1p_i(w);
    c.Lw = ln1p_over(w);
    c.wL = 4.0 * over_ln1p(w);
    c.S1 = 4.0 * w - (w + 3.0) * c.L;
    c.S2 = (1.0 - w) * c.Lw + c.wL - 4.0;
    return c;
}

struct WqRow {
    Interval q;
    Interval q_lo, q_hi;
    Interval phi;
};

WqRow make_wq_row(const Interval& q) {
    return {q, Interval(q.lo()), Interval(q.hi()), phi_of(q)};
}

Interval wq_direct(const WqCol& w, const WqRow& q) {
    const Interval num = q.q * w.S1 + w.S2;
    const Interval den = 2.0 * (q.q * w.w + 1.0);
    return (num / den) * q.phi;
}

// Corner-evaluated majorant: each additive piece of the numerator, the
// denominator and the trailing factor is monotone in both variables on the
// closed quadrant (certified by verify_monotone_claims), so the hull of its
// two extreme-corner values is its exact range over the cell.
Interval wq_corners(const WqCol& w, const WqRow& q) {
    const Interval p00 = q.q_lo * w.w_lo;
    const Interval p11 = q.q_hi * w.w_hi;
    const Interval f1 = hull(4.0 * p00, 4.0 * p11);
    const Interval f2 = hull(q.q_lo * w.g_lo, q.q_hi * w.g_hi);
    const Interval num = f1 - f2 - w.L + w.Lw + w.wL - 4.0;
    const Interval den = hull(2.0 * (p00 + 1.0), 2.0 * (p11 + 1.0));
    return (num / den) * q.phi;
}

Interval wq_A(const WqCol& w, const WqRow& q, bool tighten) {
    const Interval direct = wq_direct(w, q);
    if (!tighten) return direct;
    return intersect(direct, wq_corners(w, q));
}

// (w,r) chart.  The direct rational form divides by w + r, which vanishes
// at the chart corner.  Writing the numerator as w*T1 + r*S2 with T1 = S1/w
// exposes A as a weighted average of T1 and S2 divided by 2(1+r), which is
// sound on the whole closed quadrant.
Interval wr_A(const Interval& w, const Interval& r) {
    const Interval Lw = ln1p_over(w);
    const Interval S2 = (1.0 - w) * Lw + 4.0 * over_ln1p(w) - 4.0;
    const Interval T1 = 4.0 - (w + 3.0) * Lw;
    Interval out = hull(T1, S2) / (2.0 * (1.0 + r));
    if (w.lo() > 0.0 || r.lo() > 0.0) {
        const Interval S1 = 4.0 * w - (w + 3.0) * log1p_i(w);
        const Interval direct = (S1 + r * S2) / (2.0 * (w + r) * (1.0 + r));
        out = intersect(out, direct);
    }
    return out;
}

// Pieces of the reciprocal chart v = 1/w.  At the v = 0 edge U1 has a -inf
// endpoint, which the interval arithmetic carries through; the upper bound
// stays finite, and that is what certificates consume.
struct VParts {
    Interval U1, U2;
};

VParts make_v_parts(const Interval& v) {
    const Interval Linf = ln1p_inv(v);
    const Interval G = v_ln1p_inv(v);
    VParts p;
    p.U1 = 4.0 - (1.0 + 3.0 * v) * Linf;
    p.U2 = 4.0 / Linf - (1.0 - v) * G - 4.0 * v;
    return p;
}

Interval vq_A(const Interval& v, const Interval& q) {
    if (q.hi() == 0.0) return Interval(0.0);
    const VParts p = make_v_parts(v);
    const Interval core = (q * p.U1 + p.U2) / (2.0 * (q + 1.0));
    return phi_split(q, v) * core;
}

Interval vr_A(const Interval& v, const Interval& r) {
    const VParts p = make_v_parts(v);
    return (p.U1 + r * p.U2) / (2.0 * (1.0 + v * r) * (1.0 + r));
}

Interval eval_quantity(const RegionSpec& spec, const Interval& c1,
                       const Interval& c2, bool tighten) {
    switch (spec.quantity) {
        case Quantity::A:
            return interval_A(c1, c2, spec.chart, tighten);
        case Quantity::DrA:
            return bound_dr_A(c1, c2);
        case Quantity::AinfDD:
            return bound_Ainf_dd(c1);
    }
    throw std::invalid_argument("unknown quantity");
}

// Double-word re-evaluation of the corner majorant.  Every corner piece is
// a point expression, so the extra precision strips the ulp slack that the
// stepped double arithmetic accumulates.  It can rescue exactly those cells
// that miss the threshold by rounding noise rather than by mesh width.
Interval wide_wq_A(const Interval& w, const Interval& q) {
    using W = WideInterval;
    const W w0(w.lo()), w1(w.hi()), q0(q.lo()), q1(q.hi());
    const W one(1.0), two(2.0), three(3.0), four(4.0);
    const W L0 = log1p_w(w0), L1 = log1p_w(w1);
    const Interval f1 =
        hull((four * q0 * w0).to_interval(), (four * q1 * w1).to_interval());
    const Interval f2 = hull((q0 * (w0 + three) * L0).to_interval(),
                             (q1 * (w1 + three) * L1).to_interval());
    const Interval f3 = hull(L0.to_interval(), L1.to_interval());
    const Interval f4 = hull((L1 / w1).to_interval(), (L0 / w0).to_interval());
    const Interval f5 =
        hull((four * w0 / L0).to_interval(), (four * w1 / L1).to_interval());
    const Interval num = f1 - f2 - f3 + f4 + f5 - 4.0;
    const Interval den = hull((two * (q0 * w0 + one)).to_interval(),
                              (two * (q1 * w1 + one)).to_interval());
    const Interval phi = hull((q0 / (q0 + one)).to_interval(),
                              (q1 / (q1 + one)).to_interval());
    return (num / den) * phi;
}

struct Cell {
    double a1, b1, a2, b2;
};

struct ProcessResult {
    bool certified = false;
    double contrib = kNegInf;  // upper-bound contribution to the reduction
    std::int64_t refined = 0;
    std::int64_t wide = 0;
};

// Adaptive treatment of one failing mesh cell: an optional double-word
// rescue, then longest-edge bisection in a deterministic stack order.  On
// budget exhaustion or a failing near-degenerate cell the contribution
// falls back to the root bound, which still covers the whole cell.
ProcessResult process_cell(const RegionSpec& spec, bool tighten,
                           std::int64_t budget, const Cell& root,
                           const Interval& root_bound, bool root_ok) {
    const double thr = spec.threshold;
    double root_hi = root_ok ? root_bound.hi() : kPosInf;
    ProcessResult res;

    if (root_ok && spec.quantity == Quantity::A && spec.chart == Chart::WQ &&
        root.a1 > 0.0) {
        res.wide = 1;
        root_hi = intersect(root_bound, wide_wq_A(Interval(root.a1, root.b1),
                                                  Interval(root.a2, root.b2)))
                      .hi();
        if (root_hi <= thr) {
            res.certified = true;
            res.contrib = root_hi;
            return res;
        }
    }

    const auto too_small = [](const Cell& c) {
        const double s1 = std::max(1.0, std::fabs(c.b1));
        const double s2 = std::max(1.0, std::fabs(c.b2));
        return (c.b1 - c.a1) <= 1e-13 * s1 && (c.b2 - c.a2) <= 1e-13 * s2;
    };

    std::vector<Cell> stack;
    const auto split_into = [&stack](const Cell& c) {
        if (c.b1 - c.a1 >= c.b2 - c.a2) {
            const double m = 0.5 * (c.a1 + c.b1);
            stack.push_back({m, c.b1, c.a2, c.b2});
            stack.push_back({c.a1, m, c.a2, c.b2});
        } else {
            const double m = 0.5 * (c.a2 + c.b2);
            stack.push_back({c.a1, c.b1, m, c.b2});
            stack.push_back({c.a1, c.b1, c.a2, m});
        }
    };

    if (too_small(root)) {
        res.contrib = root_hi;
        return res;
    }
    split_into(root);

    double certified_max = kNegInf;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        if (res.refined >= budget) {
            res.contrib = std::max(root_hi, certified_max);
            return res;
        }
        ++res.refined;
        bool ok = true;
        Interval b;
        try {
            b = eval_quantity(spec, Interval(c.a1, c.b1), Interval(c.a2, c.b2),
                              tighten);
        } catch (const IntervalError&) {
            ok = false;  // zero-containing denominator: mandatory bisection
        }
        if (ok && b.hi() <= thr) {
            certified_max = std::max(certified_max, b.hi());
            continue;
        }
        if (too_small(c)) {
            res.contrib = std::max(root_hi, certified_max);
            return res;
        }
        split_into(c);
    }
    res.certified = true;
    res.contrib = certified_max;
    return res;
}

std::vector<double> mesh_edges(double lo, double hi, double step) {
    std::vector<double> e{lo};
    if (hi > lo) {
        auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / step - 1e-9));
        if (n < 1) n = 1;
        e.reserve(static_cast<std::size_t>(n) + 1);
        for (std::int64_t k = 1; k < n; ++k)
            e.push_back(std::min(lo + static_cast<double>(k) * step, hi));
        e.push_back(hi);
    } else {
        e.push_back(hi);  // degenerate axis: a single zero-width cell
    }
    return e;
}

struct ColOut {
    double max_hi = kNegInf;
    std::int64_t refined = 0;
    std::int64_t wide = 0;
    bool failed = false;
    Cell first_fail{0.0, 0.0, 0.0, 0.0};
};

void run_column(const RegionSpec& spec, bool tighten, std::int64_t per_cell,
                const std::vector<double>& e1, const std::vector<double>& e2,
                const std::vector<WqRow>& rows, std::size_t i, ColOut& out,
                std::ofstream* csv) {
    const Interval c1(e1[i], e1[i + 1]);
    const bool wq_fast =
        spec.quantity == Quantity::A && spec.chart == Chart::WQ;
    WqCol col;
    if (wq_fast) col = make_wq_col(c1);
    for (std::size_t j = 0; j + 1 < e2.size(); ++j) {
        const Cell cell{e1[i], e1[i + 1], e2[j], e2[j + 1]};
        bool ok = true;
        Interval b;
        try {
            if (wq_fast) {
                if (tighten) {
                    b = wq_corners(col, rows[j]);
                    if (b.hi() > spec.threshold)
                        b = intersect(b, wq_direct(col, rows[j]));
                } else {
                    b = wq_direct(col, rows[j]);
                }
            } else {
                b = eval_quantity(spec, c1, Interval(cell.a2, cell.b2),
                                  tighten);
            }
        } catch (const IntervalError&) {
            ok = false;
        }
        ProcessResult pr;
        if (ok && b.hi() <= spec.threshold) {
            pr.certified = true;
            pr.contrib = b.hi();
        } else {
            pr = process_cell(spec, tighten, per_cell, cell, b, ok);
        }
        out.max_hi = std::max(out.max_hi, pr.contrib);
        out.refined += pr.refined;
        out.wide += pr.wide;
        if (!pr.certified && !out.failed) {
            out.failed = true;
            out.first_fail = cell;
        }
        if (csv) {
            (*csv) << std::setprecision(17) << cell.a1 << ',' << cell.b1 << ','
                   << cell.a2 << ',' << cell.b2 << ',';
            if (ok)
                (*csv) << b.lo() << ',' << b.hi();
            else
                (*csv) << "nan,nan";
            (*csv) << ',' << (pr.certified ? 1 : 0) << '\n';
        }
    }
}

Certificate run_region(const RegionSpec& spec, std::int64_t budget,
                       int threads, std::ofstream* csv) {
    if (!(spec.step1 > 0.0) || !(spec.step2 > 0.0))
        throw std::invalid_argument("mesh steps must be positive");
    if (!std::isfinite(spec.lo1) || !std::isfinite(spec.hi1) ||
        !std::isfinite(spec.lo2) || !std::isfinite(spec.hi2))
        throw std::invalid_argument(
            "region bounds must be finite; unbounded directions go through "
            "a reciprocal chart");
    if (spec.hi1 < spec.lo1 || spec.hi2 < spec.lo2)
        throw std::invalid_argument("region bounds must be ordered");
    if (spec.lo1 < 0.0 || spec.lo2 < 0.0)
        throw std::invalid_argument("chart coordinates are nonnegative");
    if (threads < 1) threads = 1;
    if (budget < 0) budget = 0;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> e1 = mesh_edges(spec.lo1, spec.hi1, spec.step1);
    const std::vector<double> e2 = mesh_edges(spec.lo2, spec.hi2, spec.step2);
    const auto n1 = static_cast<std::int64_t>(e1.size()) - 1;
    const auto n2 = static_cast<std::int64_t>(e2.size()) - 1;

    Certificate cert;
    cert.region = spec.name;
    cert.threshold = spec.threshold;
    cert.cells_total = n1 * n2;
    const std::int64_t per_cell =
        std::max<std::int64_t>(64, budget / std::max<std::int64_t>(1, cert.cells_total));

    bool tighten = false;
    std::vector<WqRow> rows;
    if (spec.chart == Chart::WQ && spec.quantity == Quantity::A) {
        const auto claims = verify_monotone_claims(spec);
        tighten = std::all_of(claims.begin(), claims.end(),
                              [](const MonotoneClaim& c) { return c.certified; });
        rows.reserve(static_cast<std::size_t>(n2));
        for (std::int64_t j = 0; j < n2; ++j)
            rows.push_back(make_wq_row(Interval(e2[j], e2[j + 1])));
    }

    std::vector<ColOut> outs(static_cast<std::size_t>(n1));
    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            run_column(spec, tighten, per_cell, e1, e2, rows, i, outs[i], csv);
    };
    if (threads == 1 || csv != nullptr || n1 == 1) {
        worker(0, static_cast<std::size_t>(n1));
    } else {
        const auto t = std::min<std::int64_t>(threads, n1);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(t));
        for (std::int64_t k = 0; k < t; ++k) {
            const auto b = static_cast<std::size_t>(n1 * k / t);
            const auto e = static_cast<std::size_t>(n1 * (k + 1) / t);
            pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    // Index-ordered reduction: identical results for every thread count.
    double sup = kNegInf;
    for (const ColOut& o : outs) {
        sup = std::max(sup, o.max_hi);
        cert.cells_refined += o.refined;
        cert.cells_wide += o.wide;
        if (o.failed && !cert.failing_cell) {
            cert.failing_cell = {{o.first_fail.a1, o.first_fail.b1,
                                  o.first_fail.a2, o.first_fail.b2}};
        }
    }
    cert.sup_bound = sup;
    cert.pass = cert.sup_bound <= cert.threshold;
    cert.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return cert;
}

double a_inf(double w) {
    return A_value(w, std::numeric_limits<double>::infinity());
}

double a_inf_deriv(double w) {
    return -0.5 / (1.0 + w) - 1.5 / (w * (1.0 + w)) +
           1.5 * std::log1p(w) / (w * w);
}

}  // namespace

Interval interval_A(const Interval& c1, const Interval& c2, Chart chart,
                    bool tighten) {
    check_nonneg(c1, "1");
    check_nonneg(c2, "2");
    switch (chart) {
        case Chart::WQ:
            return wq_A(make_wq_col(c1), make_wq_row(c2), tighten);
        case Chart::WR:
            return wr_A(c1, c2);
        case Chart::VQ:
            return vq_A(c1, c2);
        case Chart::VR:
            return vr_A(c1, c2);
    }
    throw std::invalid_argument("unknown chart");
}

std::vector<MonotoneClaim> verify_monotone_claims(const RegionSpec& region) {
    if (region.chart != Chart::WQ)
        throw std::invalid_argument(
            "the monotone-factor strategy applies to the (w,q) chart only");
    if (region.lo1 < 0.0 || region.lo2 < 0.0)
        throw std::invalid_argument(
            "monotone claims are stated on the closed positive quadrant");

    constexpr int kTiles = 24;
    const auto tile = [](double lo, double hi, int k) {
        const double a = lo + (hi - lo) * k / kTiles;
        const double b = lo + (hi - lo) * (k + 1) / kTiles;
        return Interval(a, std::max(a, b));
    };

    // h(w) = w/(1+w) - ln(1+w) has h(0) = 0; certifying h' <= 0 tile by
    // tile pins h <= 0, hence ln(1+w)/w decreasing and w/ln(1+w)
    // increasing.  The h tiling must start at 0 regardless of the region's
    // left edge, since the anchor h(0) = 0 lives there.
    bool h_ok = true;
    for (int k = 0; k < kTiles; ++k) {
        const Interval w = tile(0.0, region.hi1, k);
        const Interval hprime = -(w / sqr_i(1.0 + w));
        if (!(hprime.hi() <= 0.0)) h_ok = false;
    }

    const auto all_w = [&](auto deriv, bool nonneg) {
        for (int kw = 0; kw < kTiles; ++kw)
            for (int kq = 0; kq < kTiles; ++kq) {
                const Interval d =
                    deriv(tile(region.lo1, region.hi1, kw),
                          tile(region.lo2, region.hi2, kq));
                if (nonneg ? !(d.lo() >= 0.0) : !(d.hi() <= 0.0)) return false;
            }
        return true;
    };

    std::vector<MonotoneClaim> out;
    const auto add = [&out](const char* f, const char* v, int dir, bool ok) {
        out.push_back({f, v, dir, ok});
    };

    add("4qw", "w", +1,
        all_w([](const Interval&, const Interval& q) { return 4.0 * q; }, true));
    add("4qw", "q", +1,
        all_w([](const Interval& w, const Interval&) { return 4.0 * w; }, true));
    add("q(w+3)ln(w+1)", "w", +1,
        all_w(
            [](const Interval& w, const Interval& q) {
                return q * (log1p_i(w) + (w + 3.0) / (1.0 + w));
            },
            true));
    add("q(w+3)ln(w+1)", "q", +1,
        all_w([](const Interval& w,
                 const Interval&) { return (w + 3.0) * log1p_i(w); },
              true));
    add("ln(w+1)", "w", +1,
        all_w([](const Interval& w, const Interval&) { return 1.0 / (1.0 + w); },
              true));
    add("ln(w+1)/w", "w", -1, h_ok);
    add("4w/ln(w+1)", "w", +1, h_ok);
    add("2(qw+1)", "w", +1,
        all_w([](const Interval&, const Interval& q) { return 2.0 * q; }, true));
    add("2(qw+1)", "q", +1,
        all_w([](const Interval& w, const Interval&) { return 2.0 * w; }, true));
    add("q/(q+1)", "q", +1,
        all_w([](const Interval&,
                 const Interval& q) { return 1.0 / sqr_i(q + 1.0); },
              true));
    return out;
}

Interval bound_dr_A(const Interval& w, const Interval& r) {
    if (!(w.lo() >= 1.0) || !(w.hi() <= 4.0) || !(r.lo() >= 0.0) ||
        !(r.hi() <= 1.0))
        throw std::invalid_argument(
            "bound_dr_A expects a cell inside [1,4] x [0,1]");
    const Interval L = log1p_i(w);
    const Interval S1 = 4.0 * w - (w + 3.0) * L;
    const Interval S2 =
        (1.0 - w) * ln1p_over(w) + 4.0 * over_ln1p(w) - 4.0;
    const Interval num =
        S2 * (w - sqr_i(r)) - S1 * (1.0 + w + 2.0 * r);
    const Interval den = 2.0 * sqr_i(w + r) * sqr_i(1.0 + r);
    return num / den;
}

Interval bound_Ainf_dd(const Interval& w) {
    if (!(w.lo() >= 1.0) || !(w.hi() <= 4.0))
        throw std::invalid_argument("bound_Ainf_dd expects a cell inside [1,4]");
    const Interval om = 1.0 + w;
    const Interval w2 = sqr_i(w);
    const Interval L = log1p_i(w);
    return 1.5 / w2 + 1.5 / (w2 * om) - 1.0 / sqr_i(om) - 3.0 * (L / (w2 * w));
}

AinfMax maximize_A_inf() {
    constexpr int kSweep = 1000;
    for (int i = 0; i < kSweep; ++i) {
        const double a = 1.0 + 3.0 * i / kSweep;
        const double b = 1.0 + 3.0 * (i + 1) / kSweep;
        if (!(bound_Ainf_dd(Interval(a, b)).hi() <= 0.0))
            throw std::runtime_error(
                "concavity certificate for A(w,inf) failed on [1,4]");
    }

    double lo = 1.0, hi = 4.0;
    constexpr double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = a_inf(x1);
    double f2 = a_inf(x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = a_inf(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = a_inf(x1);
        }
    }

    // The profile is strictly concave here, so the derivative changes sign
    // exactly once inside a slightly padded bracket.
    double dlo = std::max(1.0, lo - 1e-4);
    double dhi = std::min(4.0, hi + 1e-4);
    while (dhi - dlo > 1e-12) {
        const double mid = 0.5 * (dlo + dhi);
        if (a_inf_deriv(mid) > 0.0)
            dlo = mid;
        else
            dhi = mid;
    }

    AinfMax out;
    out.w_star = 0.5 * (dlo + dhi);
    out.value = a_inf(out.w_star);
    out.certified_concave = true;
    return out;
}

Certificate verify_region(const RegionSpec& spec, std::int64_t budget,
                          int threads) {
    return run_region(spec, budget, threads, nullptr);
}

Certificate verify_region_dump(const RegionSpec& spec, std::int64_t budget,
                               int threads, const std::string& csv_path) {
    const std::vector<double> e1 = mesh_edges(spec.lo1, spec.hi1, spec.step1);
    const std::vector<double> e2 = mesh_edges(spec.lo2, spec.hi2, spec.step2);
    const auto cells = (static_cast<std::int64_t>(e1.size()) - 1) *
                       (static_cast<std::int64_t>(e2.size()) - 1);
    if (cells > 5000000)
        throw std::invalid_argument(
            "per-cell dump refused above five million cells");
    std::ofstream csv(csv_path);
    if (!csv)
        throw std::invalid_argument("cannot open dump file " + csv_path);
    csv << "lo1,hi1,lo2,hi2,bound_lo,bound_hi,certified\n";
    return run_region(spec, budget, threads, &csv);
}

RegionSpec standard_region(const std::string& name) {
    RegionSpec s;
    s.name = name;
    if (name == "R1") {
        s.chart = Chart::WQ;
        s.hi1 = 6.0;
        s.hi2 = 1.0;
        s.step1 = 6e-2;
        s.step2 = 1e-1;
        s.threshold = 0.51;
    } else if (name == "R2") {
        s.chart = Chart::WR;
        s.hi1 = 1.0;
        s.hi2 = 1.0;
        s.step1 = 1e-2;
        s.step2 = 1e-2;
        s.threshold = 0.617;
    } else if (name == "R3") {
        s.chart = Chart::WR;
        s.lo1 = 1.0;
        s.hi1 = 4.0;
        s.hi2 = 1.0;
        s.step1 = 5e-3;
        s.step2 = 1e-3;
        s.threshold = -0.08;
        s.quantity = Quantity::DrA;
    } else if (name == "R4") {
        s.chart = Chart::VQ;
        s.hi1 = 1.0 / 6.0;
        s.hi2 = 1.0;
        s.step1 = 2e-2;
        s.step2 = 1e-1;
        s.threshold = 0.50;
    } else if (name == "R5") {
        s.chart = Chart::VR;
        s.hi1 = 0.25;
        s.hi2 = 1.0;
        s.step1 = 2e-3;
        s.step2 = 1e-2;
        s.threshold = 0.605;
    } else if (name == "R6") {
        s.chart = Chart::WQ;
        s.hi1 = 3.0;
        s.hi2 = 1.36;
        s.step1 = 3e-3;
        s.step2 = 1.36e-3;
        s.threshold = 0.498;
    } else if (name == "R7") {
        s.chart = Chart::WQ;
        s.lo1 = 3.0;
        s.hi1 = 5.0;
        s.hi2 = 1.3;
        s.step1 = 2e-3;
        s.step2 = 1.3e-3;
        s.threshold = 0.498;
    } else if (name == "R8") {
        s.chart = Chart::WQ;
        s.lo1 = 3.0;
        s.hi1 = 5.0;
        s.lo2 = 1.3;
        s.hi2 = 1.36;
        s.step1 = 2e-4;
        s.step2 = 6e-6;
        s.threshold = 0.49996;
    } else if (name == "R9") {
        s.chart = Chart::VQ;
        s.hi1 = 0.2;
        s.hi2 = 1.36;
        s.step1 = 2e-3;
        s.step2 = 1.36e-2;
        s.threshold = 0.4992;
    } else if (name == "R3-Ainf-concavity") {
        s.chart = Chart::WR;
        s.lo1 = 1.0;
        s.hi1 = 4.0;
        s.step1 = 3e-3;
        s.step2 = 1.0;
        s.threshold = 0.0;
        s.quantity = Quantity::AinfDD;
    } else if (name == "R3-Ainf-max") {
        s.chart = Chart::WR;
        s.lo1 = 1.0;
        s.hi1 = 4.0;
        s.step1 = 3e-3;
        s.step2 = 1.0;
        s.threshold = 0.6272;
    } else {
        throw std::invalid_argument("unknown region name " + name);
    }
    return s;
}

namespace {

MasterCertificate run_master(const std::string& name, double master_threshold,
                             const std::vector<std::string>& regions,
                             std::int64_t budget, double threshold_scale,
                             const std::vector<std::string>& sup_regions,
                             int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    MasterCertificate mc;
    mc.name = name;
    mc.threshold = master_threshold * threshold_scale;
    for (const std::string& rn : regions) {
        RegionSpec spec = standard_region(rn);
        spec.threshold *= threshold_scale;
        mc.parts.push_back(verify_region(spec, budget, threads));
        if (!mc.parts.back().pass && mc.failing_region.empty())
            mc.failing_region = rn;
    }
    double sup = kNegInf;
    for (const Certificate& c : mc.parts)
        if (std::find(sup_regions.begin(), sup_regions.end(), c.region) !=
            sup_regions.end())
            sup = std::max(sup, c.sup_bound);
    mc.sup_bound = sup;
    mc.pass = mc.failing_region.empty() && mc.sup_bound <= mc.threshold;
    mc.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return mc;
}

}  // namespace

MasterCertificate verify_calc(std::int64_t budget, double threshold_scale,
                              int threads) {
    MasterCertificate mc = run_master(
        "calc", 0.63,
        {"R1", "R2", "R4", "R5", "R3", "R3-Ainf-concavity", "R3-Ainf-max"},
        budget, threshold_scale,
        {"R1", "R2", "R4", "R5", "R3-Ainf-max"}, threads);
    // The derivative sweep pushes R3 to its r = 0 edge, where the certified
    // concave profile has a unique maximizer; surfacing it here keeps the
    // headline bound attached to a concrete point.
    maximize_A_inf();
    return mc;
}

MasterCertificate verify_calc_half(std::int64_t budget, double threshold_scale,
                                   int threads) {
    return run_master("calcHalf", 0.5, {"R6", "R7", "R8", "R9"}, budget,
                      threshold_scale, {"R6", "R7", "R8", "R9"}, threads);
}

}  // namespace psz
