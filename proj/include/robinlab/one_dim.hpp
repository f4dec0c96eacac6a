#pragma once

#include <cmath>
#include <utility>

#include "robinlab/errors.hpp"

namespace robinlab {

/// First eigenvalue of the 1D mixed Neumann-Robin problem on [0, s0]:
/// X'' + nu X = 0, X'(0) = 0, X'(s0) + beta X(s0) = 0, whose first
/// eigenvalue is the first positive root of nu = beta^2 / tan^2(sqrt(nu) s0).
struct OneDimEigen {
    double beta = 0.0;
    double s0 = 0.0;
    double nu1 = 0.0;
    double residual = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

/// 1D Robin torsion of the segment [0, s]: T_beta = s^3/3 + s^2/beta.
inline double torsion_1d(double s, double beta) {
    if (!(s > 0.0)) throw NonPositiveInput("segment length must be positive");
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    return s * s * s / 3.0 + s * s / beta;
}

/// Elementary bracket for nu1(beta, s0):
/// (pi^2/(4 s0^2)) / (1 + pi^2/(4 beta s0)) <= nu1 <= (pi^2/(4 s0^2)) / (1 + 2/(beta s0)).
inline std::pair<double, double> nu1_bounds(double beta, double s0) {
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    if (!(s0 > 0.0)) throw NonPositiveInput("s0 must be positive");
    const double pi = std::acos(-1.0);
    const double neumann_cap = pi * pi / (4.0 * s0 * s0);
    const double lo = neumann_cap / (1.0 + pi * pi / (4.0 * beta * s0));
    const double hi = neumann_cap / (1.0 + 2.0 / (beta * s0));
    return {lo, hi};
}

/// Solves sqrt(nu) tan(sqrt(nu) s0) = beta on (0, (pi/(2 s0))^2) by bisection.
///
/// With theta = sqrt(nu) s0 in (0, pi/2) the equation reads theta tan(theta) =
/// beta s0, whose left side grows from 0 to +inf, so there is exactly one root.
/// The solve runs in the pole-shifted variable phi = pi/2 - theta, where the
/// equation becomes G(phi) = (pi/2 - phi) cos(phi) - beta s0 sin(phi) = 0 with
/// G strictly decreasing; this keeps full relative accuracy in the distance to
/// the tangent pole, so the defining residual stays below 1e-10 relative even
/// deep in the Dirichlet regime (beta s0 >> 1), where bisection directly on nu
/// would lose seven digits to the pole's conditioning.
inline OneDimEigen nu1(double beta, double s0) {
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    if (!(s0 > 0.0)) throw NonPositiveInput("s0 must be positive");
    const double pi = std::acos(-1.0);
    const double bs = beta * s0;
    const auto g = [pi, bs](double phi) {
        return (0.5 * pi - phi) * std::cos(phi) - bs * std::sin(phi);
    };

    double lo = 0.0;           // G(0) = pi/2 > 0
    double hi = 0.5 * pi;      // G(pi/2) = -beta s0 < 0
    if (!(g(lo) > 0.0 && g(hi) < 0.0))
        throw NoConvergence("bracket endpoints do not straddle the root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at machine resolution
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double phi = 0.5 * (lo + hi);
    const double theta = 0.5 * pi - phi;

    OneDimEigen e;
    e.beta = beta;
    e.s0 = s0;
    e.nu1 = (theta / s0) * (theta / s0);
    // Residual of nu = beta^2 / tan^2(sqrt(nu) s0), evaluated through the
    // identity tan(sqrt(nu) s0) = cot(phi) so the pole does not amplify it.
    const double tn = std::tan(phi);
    e.residual = std::abs(e.nu1 - beta * beta * (tn * tn));
    if (!(e.residual <= 1e-10 * e.nu1))
        throw NoConvergence("eigenvalue residual above 1e-10 relative");
    std::tie(e.lower_bound, e.upper_bound) = nu1_bounds(beta, s0);
    return e;
}

/// First eigenfunction X(s) = cos(sqrt(nu1) s), normalized by X(0) = 1.
inline double eigenfunction_1d(const OneDimEigen& e, double s) {
    if (s < 0.0 || s > e.s0) throw OutOfDomain("s must lie in [0, s0]");
    return std::cos(std::sqrt(e.nu1) * s);
}

} // namespace robinlab
