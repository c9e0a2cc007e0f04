#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "psz/function_model.hpp"

using psz::ExponentSpec;
using psz::eval_u;
using psz::make_double_ramp;
using psz::make_hat;
using psz::PiecewiseLinear;

TEST_CASE("hat construction") {
    const auto u = make_hat(0.0, 1.0, 0.5);
    CHECK(u.breakpoints() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(u.values() == std::vector<double>{0.0, 0.0, 0.5, 0.0, 0.0});

    CHECK(make_hat(0.5, 2.0, 0.25).max_value() == 0.5);
    CHECK_THROWS_AS(make_hat(0.9, 1.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_hat(0.0, -1.0, 0.2), std::invalid_argument);
}

TEST_CASE("double ramp construction") {
    const auto u = make_double_ramp(-0.5, 0.5, 1.0, 1.0, 0.1);
    CHECK(u.breakpoints() == std::vector<double>{-1.0, -0.6, -0.4, 0.4, 0.6, 1.0});
    CHECK(u.values() == std::vector<double>{0.0, 0.0, 0.2, 0.2, 0.0, 0.0});
    CHECK(u.max_value() == 0.2);

    CHECK_THROWS_AS(make_double_ramp(-0.1, 0.1, 1.0, 1.0, 0.15), std::invalid_argument);
    CHECK_THROWS_AS(make_double_ramp(-0.95, 0.5, 1.0, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_double_ramp(0.5, -0.5, 1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("piecewise linear validation") {
    CHECK_THROWS_AS(PiecewiseLinear({-1.0, 0.5}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({-1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({-1.0, 0.0, 1.0}, {0.0, -0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({-1.0, 0.0, 1.0}, {0.1, 0.5, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(PiecewiseLinear({-1.0, 1.0}, {0.0, 0.0}));
}

TEST_CASE("evaluation is exact at breakpoints and affine between") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-0.99, 0.99);
    std::uniform_real_distribution<double> uv(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> bp{-1.0, ux(rng), ux(rng), ux(rng), 1.0};
        std::sort(bp.begin(), bp.end());
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (bp[i] == bp[i + 1]) distinct = false;
        if (!distinct) continue;
        std::vector<double> val{0.0, uv(rng), uv(rng), uv(rng), 0.0};
        const PiecewiseLinear u(bp, val);

        for (std::size_t i = 0; i < bp.size(); ++i)
            CHECK(eval_u(u, bp[i]) == val[i]);

        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            const double xm = 0.5 * (bp[i] + bp[i + 1]);
            const double expected = val[i] + (val[i + 1] - val[i]) * (xm - bp[i]) / (bp[i + 1] - bp[i]);
            CHECK(eval_u(u, xm) == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(eval_u(make_hat(0.0, 1.0, 0.5), 1.5), std::domain_error);
}

TEST_CASE("segments reproduce parent endpoint values") {
    const auto u = make_double_ramp(-0.3, 0.6, 1.0, 2.0, 0.05);
    const auto segs = u.segments();
    REQUIRE(segs.size() == u.breakpoints().size() - 1);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(segs[i].value_at(segs[i].x_lo) == u.values()[i]);
        CHECK(segs[i].value_at(segs[i].x_hi) == u.values()[i + 1]);
    }
    CHECK(segs[1].slope == doctest::Approx(1.0));
    CHECK(segs[3].slope == doctest::Approx(-0.5));
}

TEST_CASE("analytic exponent families") {
    const auto c = ExponentSpec::constant(2.0);
    CHECK(c.eval(0.3).p == 2.0);
    CHECK(c.eval(0.3).q == 1.0);
    CHECK(c.eval(0.3).q1 == 0.0);
    CHECK(c.eval(0.3).q2 == 0.0);

    const auto q = ExponentSpec::quadratic(2.0, 0.5);
    CHECK(q.eval(0.5).p == doctest::Approx(2.125).epsilon(1e-15));
    CHECK(q.eval(0.5).q1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q.eval(0.5).q2 == 1.0);

    const auto a = ExponentSpec::affine(2.0, 0.5);
    CHECK(a.eval(0.4).p == doctest::Approx(2.2).epsilon(1e-15));
    CHECK(a.eval(0.4).q1 == 0.5);
    CHECK(a.eval(0.4).q2 == 0.0);
}

TEST_CASE("power well derivatives match finite differences") {
    const auto w = ExponentSpec::powerwell(0.5, 1.0, 1.0 / 0.37);
    auto pval = [&](double x) { return w.eval(x).p; };
    for (double x : {-0.8, -0.3, 0.0, 0.2, 0.55, 0.9}) {
        const auto v = w.eval(x);
        CHECK(v.p == doctest::Approx(1.0 + std::pow(0.5 + x * x, 1.0 / 0.37)).epsilon(1e-15));

        const double h1 = 1e-6;
        const double fd1 = (pval(x + h1) - pval(x - h1)) / (2.0 * h1);
        CHECK(v.q1 == doctest::Approx(fd1).epsilon(1e-7));

        const double h2 = 1e-4;
        const double fd2 = (pval(x + h2) - 2.0 * pval(x) + pval(x - h2)) / (h2 * h2);
        CHECK(v.q2 == doctest::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("exponent below one is rejected") {
    CHECK_THROWS_AS(ExponentSpec::constant(0.9), std::invalid_argument);
    CHECK_THROWS_AS(ExponentSpec::quadratic(0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ExponentSpec::affine(1.5, 1.0), std::invalid_argument);
    CHECK_NOTHROW(ExponentSpec::affine(2.0, 0.5));
    CHECK_NOTHROW(ExponentSpec::quadratic(1.0, 1.0));
}

TEST_CASE("tabulated exponent tracks its source function") {
    std::vector<double> xs, ps;
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 0.01 * i;
        xs.push_back(x);
        ps.push_back(2.0 + 0.5 * x * x);
    }
    xs.back() = 1.0;
    const auto tab = ExponentSpec::table(xs, ps);
    CHECK(tab.kind() == "table");
    // Interior points away from cell boundaries, where the interpolant and
    // its difference quotients are cleanly accurate.
    for (double x : {-0.503, -0.215, 0.004, 0.317, 0.862}) {
        const auto v = tab.eval(x);
        CHECK(v.p == doctest::Approx(2.0 + 0.5 * x * x).epsilon(1e-6));
        CHECK(std::abs(v.q1 - x) < 1e-3);
        CHECK(std::abs(v.q2 - 1.0) < 0.2);
    }
    // Near the boundary only the value itself keeps full accuracy (the
    // interpolant endpoint derivative is one-sided).
    CHECK(tab.eval(0.995).p == doctest::Approx(2.0 + 0.5 * 0.995 * 0.995).epsilon(1e-4));

    std::vector<double> bad = ps;
    for (double& p : bad) p -= 1.2;
    CHECK_THROWS_AS(ExponentSpec::table(xs, bad), std::invalid_argument);
}

TEST_CASE("evaluation outside the domain is rejected") {
    const auto q = ExponentSpec::quadratic(2.0, 1.0);
    CHECK_THROWS_AS(q.eval(1.0001), std::domain_error);
    CHECK_THROWS_AS(q.eval(-2.0), std::domain_error);
    CHECK_NOTHROW(q.eval(1.0));
    CHECK_NOTHROW(q.eval(-1.0));
}
