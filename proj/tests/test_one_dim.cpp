// Tests for the one-dimensional mixed Neumann-Robin slab problems: torsion
// on [0, s0], the first eigenvalue nu1(beta, s0) with its a-priori bounds,
// and the associated eigenfunction.  Root locations are cross-checked against
// independent bisection oracles written directly from the secular equation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>

#include "robinlab/robinlab.hpp"

namespace rl = robinlab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent oracle: smallest positive root of sqrt(nu) tan(sqrt(nu) s0) =
// beta, bisected in x = sqrt(nu) s0 on (0, pi/2).  Deliberately different
// from the library's change of variables.
double nu1_oracle(double beta, double s0) {
    const auto f = [beta, s0](double x) { return x * std::tan(x) - beta * s0; };
    double lo = 1e-9;
    double hi = 0.5 * kPi - 1e-12;
    REQUIRE(f(lo) < 0.0);
    REQUIRE(f(hi) > 0.0);
    for (int i = 0; i < 500; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return (x / s0) * (x / s0);
}

} // namespace

TEST_CASE("slab torsion closed form", "[one_dim]") {
    // T(s, beta) = s^3/3 + s^2/beta.
    CHECK(rl::torsion_1d(1.0, 1.0) == Catch::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(rl::torsion_1d(2.0, 4.0) == Catch::Approx(11.0 / 3.0).epsilon(1e-13));
    CHECK(rl::torsion_1d(1.0, 1e12) == Catch::Approx(1.0 / 3.0).epsilon(1e-11));

    CHECK_THROWS_AS(rl::torsion_1d(0.0, 1.0), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::torsion_1d(1.0, 0.0), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::torsion_1d(-1.0, 1.0), rl::NonPositiveInput);
}

TEST_CASE("nu1 pinned values and oracle agreement", "[one_dim]") {
    // beta = s0 = 1: x tan x = 1 has x ~ 0.8603335890, nu1 = x^2.
    const auto e11 = rl::nu1(1.0, 1.0);
    CHECK(e11.nu1 == Catch::Approx(0.7401738843).epsilon(1e-8));
    CHECK(e11.nu1 == Catch::Approx(nu1_oracle(1.0, 1.0)).epsilon(1e-12));

    // beta = 1, s0 = 1/4.
    const auto eq = rl::nu1(1.0, 0.25);
    CHECK(eq.nu1 == Catch::Approx(nu1_oracle(1.0, 0.25)).epsilon(1e-12));
    CHECK(eq.nu1 == Catch::Approx(3.6878496).epsilon(1e-6));

    // Dirichlet limit: beta = 1e9 pushes nu1 to (pi/(2 s0))^2.
    const auto ed = rl::nu1(1e9, 1.0);
    CHECK(ed.nu1 == Catch::Approx(kPi * kPi / 4.0).epsilon(1e-6));

    CHECK_THROWS_AS(rl::nu1(0.0, 1.0), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::nu1(1.0, 0.0), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::nu1(-2.0, 1.0), rl::NonPositiveInput);
}

TEST_CASE("nu1_bounds pinned values", "[one_dim]") {
    const auto [lo11, hi11] = rl::nu1_bounds(1.0, 1.0);
    // lo = (pi^2/4) / (1 + pi^2/4), hi = (pi^2/4) / 3.
    CHECK(lo11 == Catch::Approx(kPi * kPi / 4.0 / (1.0 + kPi * kPi / 4.0)).epsilon(1e-13));
    CHECK(hi11 == Catch::Approx(kPi * kPi / 12.0).epsilon(1e-13));
    CHECK(lo11 == Catch::Approx(0.711601).epsilon(1e-5));
    CHECK(hi11 == Catch::Approx(0.822467).epsilon(1e-5));

    const auto [lod, hid] = rl::nu1_bounds(1e9, 1.0);
    CHECK(lod == Catch::Approx(kPi * kPi / 4.0).epsilon(1e-7));
    CHECK(hid == Catch::Approx(kPi * kPi / 4.0).epsilon(1e-7));

    const auto [loq, hiq] = rl::nu1_bounds(1.0, 0.25);
    CHECK(loq == Catch::Approx(4.0 * kPi * kPi / (1.0 + kPi * kPi)).epsilon(1e-12));
    CHECK(hiq == Catch::Approx(4.0 * kPi * kPi / 9.0).epsilon(1e-12));

    CHECK_THROWS_AS(rl::nu1_bounds(0.0, 1.0), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::nu1_bounds(1.0, -1.0), rl::NonPositiveInput);
}

TEST_CASE("nu1 residual, bracket, and monotonicity on a parameter grid", "[one_dim]") {
    // 20 x 20 logarithmic grid in beta and s0.
    std::vector<double> betas, s0s;
    for (int i = 0; i < 20; ++i) {
        betas.push_back(0.1 * std::pow(1000.0, i / 19.0));
        s0s.push_back(0.05 * std::pow(100.0, i / 19.0));
    }

    for (double beta : betas) {
        double prev_in_s0 = -1.0;
        for (double s0 : s0s) {
            CAPTURE(beta, s0);
            const auto e = rl::nu1(beta, s0);
            const auto [lo, hi] = rl::nu1_bounds(beta, s0);

            CHECK(e.residual <= 1e-10 * e.nu1);
            CHECK(e.nu1 > lo);
            CHECK(e.nu1 < hi);
            CHECK(e.lower_bound == Catch::Approx(lo).epsilon(1e-14));
            CHECK(e.upper_bound == Catch::Approx(hi).epsilon(1e-14));
            CHECK(e.nu1 > 0.0);
            CHECK(e.nu1 < (kPi / (2.0 * s0)) * (kPi / (2.0 * s0)));

            // nu1 strictly decreases in s0 at fixed beta...
            if (prev_in_s0 > 0.0) CHECK(e.nu1 < prev_in_s0);
            prev_in_s0 = e.nu1;
        }
    }

    // ...and strictly increases in beta at fixed s0.
    for (double s0 : s0s) {
        double prev = -1.0;
        for (double beta : betas) {
            const double v = rl::nu1(beta, s0).nu1;
            if (prev > 0.0) CHECK(v > prev);
            prev = v;
        }
    }

    // Scaling law: nu1(beta, s0) * s0^2 depends only on beta * s0.  Compare
    // parameter pairs with matched product.
    for (double beta : {0.3, 2.0, 40.0}) {
        for (double s0 : {0.1, 0.7, 3.0}) {
            const double v1 = rl::nu1(beta, s0).nu1 * s0 * s0;
            const double scale = 3.7;
            const double v2 = rl::nu1(beta * scale, s0 / scale).nu1 * (s0 / scale) * (s0 / scale);
            CHECK(v1 == Catch::Approx(v2).epsilon(1e-10));
        }
    }
}

TEST_CASE("slab eigenfunction values and boundary condition", "[one_dim]") {
    const auto e = rl::nu1(1.0, 1.0);

    // X(s) = cos(sqrt(nu1) s): X(0) = 1 and X(1) = cos(0.8603336...) ~ 0.652184.
    CHECK(rl::eigenfunction_1d(e, 0.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(rl::eigenfunction_1d(e, 1.0) == Catch::Approx(0.652184).epsilon(1e-5));

    // Robin boundary condition at s = s0: X'(s0) + beta X(s0) = 0.
    const double root = std::sqrt(e.nu1);
    const double bc = -root * std::sin(root * e.s0) + e.beta * std::cos(root * e.s0);
    CHECK(std::abs(bc) <= 1e-8 * (root + e.beta));

    // Monotone decreasing on [0, s0] and positive.
    double prev = rl::eigenfunction_1d(e, 0.0);
    for (int i = 1; i <= 50; ++i) {
        const double s = e.s0 * i / 50.0;
        const double x = rl::eigenfunction_1d(e, s);
        CHECK(x < prev);
        CHECK(x > 0.0);
        prev = x;
    }

    CHECK_THROWS_AS(rl::eigenfunction_1d(e, -0.01), rl::OutOfDomain);
    CHECK_THROWS_AS(rl::eigenfunction_1d(e, 1.01), rl::OutOfDomain);
}
