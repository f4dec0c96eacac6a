#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "robinlab/errors.hpp"
#include "robinlab/geometry.hpp"

namespace robinlab {

/// One maximal interval [t_lo, t_hi] between edge-vanishing events, on which
/// the offset area is exactly quadratic and the offset perimeter exactly
/// affine (vertices of the inner parallel body move linearly in t while edge
/// directions stay fixed).
struct ProfilePiece {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double a = 0.0, b = 0.0, c = 0.0; // mu(t) = a + b t + c t^2
    double p = 0.0, q = 0.0;          // P(t)  = p + q t
};

struct InnerParallelProfile {
    std::vector<double> event_times; // 0 = t_0 < ... < t_k = inradius
    std::vector<ProfilePiece> pieces;
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    double I0 = 0.0;    // integral of mu over [0, r]
    double I1 = 0.0;    // integral of t*mu
    double J = 0.0;     // integral of mu^2 / P
    double t_bar = 0.0; // area / perimeter
    double s_bar = 0.0; // mu(t_bar) / perimeter

    const ProfilePiece& piece_at(double t) const {
        if (t < 0.0 || t > inradius * (1.0 + 1e-9))
            throw OutOfDomain("profile evaluated outside [0, inradius]");
        // Events are few; linear scan is exact and branch-predictable.
        for (const auto& pc : pieces)
            if (t <= pc.t_hi) return pc;
        return pieces.back();
    }

    double mu(double t) const {
        const auto& pc = piece_at(t);
        return pc.a + t * (pc.b + t * pc.c);
    }

    double P(double t) const {
        const auto& pc = piece_at(t);
        return pc.p + t * pc.q;
    }

    double mu_prime(double t) const {
        const auto& pc = piece_at(t);
        return pc.b + 2.0 * t * pc.c;
    }
};

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374402, 0.2816035507792589132, 0.4580167776572273863,
    0.6178762444026437484, 0.7554044083550030339, 0.8656312023878317439,
    0.9445750230732325761, 0.9894009349916499326};
inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550684963, 0.1826034150449235889, 0.1691565193950025382,
    0.1495959888165767320, 0.1246289712555338720, 0.0951585116824927848,
    0.0622535239386478929, 0.0271524594117540949};

template <class F>
double gauss16(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double s = 0.0;
    for (size_t i = 0; i < kGL16Nodes.size(); ++i) {
        const double d = half * kGL16Nodes[i];
        s += kGL16Weights[i] * (f(mid - d) + f(mid + d));
    }
    return s * half;
}

template <class F>
double adaptive_gauss16(F&& f, double lo, double hi, double abs_tol, int depth = 0) {
    const double whole = gauss16(f, lo, hi);
    const double mid = 0.5 * (lo + hi);
    const double split = gauss16(f, lo, mid) + gauss16(f, mid, hi);
    if (std::abs(whole - split) <= abs_tol || depth >= 40) return split;
    return adaptive_gauss16(f, lo, mid, 0.5 * abs_tol, depth + 1) +
           adaptive_gauss16(f, mid, hi, 0.5 * abs_tol, depth + 1);
}

/// Edge count of the inner parallel body (0 once it is empty).
inline int offset_edge_count(const ConvexPolygon& poly, double t) {
    const auto inner = inner_parallel(poly, t);
    return inner ? inner->size() : 0;
}

/// Locates edge-vanishing times as discontinuities of the (nonincreasing)
/// offset edge count by recursive bisection down to `tol`.
inline void locate_events(const ConvexPolygon& poly, double lo, int count_lo, double hi,
                          int count_hi, double tol, std::vector<double>& out) {
    if (count_lo == count_hi) return;
    if (hi - lo <= tol) {
        out.push_back(0.5 * (lo + hi));
        return;
    }
    const double mid = 0.5 * (lo + hi);
    const int count_mid = offset_edge_count(poly, mid);
    locate_events(poly, lo, count_lo, mid, count_mid, tol, out);
    locate_events(poly, mid, count_mid, hi, count_hi, tol, out);
}

} // namespace detail

/// Exact piecewise description of mu(t) = |Omega_t| and P(t) = P(Omega_t):
/// events found by edge-count bisection, per-interval coefficients fitted
/// from three interior offset evaluations (the model is exact between
/// events, so the fit is exact to arithmetic precision).
inline InnerParallelProfile parallel_profile(const ConvexPolygon& poly) {
    InnerParallelProfile prof;
    prof.area = area(poly);
    prof.perimeter = perimeter(poly);
    prof.inradius = detail::chebyshev_center(poly).radius;
    const double r = prof.inradius;

    std::vector<double> raw;
    detail::locate_events(poly, 0.0, poly.size(), r, 0, 1e-12 * r, raw);

    // Merge events closer than 1e-8*r (numerically simultaneous vanishings).
    // Events within 1e-6*r of the inradius snap onto it: the final collapse
    // trips the offset emptiness cutoff slightly early (area below 1e-14 of
    // the original), which would otherwise read as a phantom event.
    const double merge_tol = 1e-8 * r;
    const double snap_tol = 1e-6 * r;
    prof.event_times.push_back(0.0);
    for (double t : raw) {
        if (t >= r - snap_tol) continue;
        if (t - prof.event_times.back() > merge_tol) prof.event_times.push_back(t);
    }
    prof.event_times.push_back(r);

    const size_t k = prof.event_times.size() - 1;
    prof.pieces.resize(k);
    for (size_t i = 0; i < k; ++i) {
        ProfilePiece& pc = prof.pieces[i];
        pc.t_lo = prof.event_times[i];
        pc.t_hi = prof.event_times[i + 1];
        const double h = pc.t_hi - pc.t_lo;

        double mu_s[3], per_s[3];
        for (int j = 0; j < 3; ++j) {
            const double t = pc.t_lo + (0.25 + 0.25 * j) * h;
            const auto inner = inner_parallel(poly, t);
            if (!inner) throw Degenerate("offset empty strictly inside a profile interval");
            mu_s[j] = area(*inner);
            per_s[j] = perimeter(*inner);
        }
        // Quadratic through the local samples tau = 0.25, 0.5, 0.75.
        const double a2 = 8.0 * (mu_s[0] - 2.0 * mu_s[1] + mu_s[2]);
        const double a1 = 2.0 * (mu_s[2] - mu_s[0]) - a2;
        const double a0 = mu_s[1] - 0.5 * a1 - 0.25 * a2;
        // Convert mu(tau) with tau = (t - t_lo)/h to global t coefficients.
        pc.c = a2 / (h * h);
        pc.b = a1 / h - 2.0 * pc.c * pc.t_lo;
        pc.a = a0 - pc.t_lo * (a1 / h) + pc.c * pc.t_lo * pc.t_lo;
        // Affine perimeter from the outer two samples.
        pc.q = (per_s[2] - per_s[0]) / (0.5 * h);
        pc.p = per_s[1] - pc.q * (pc.t_lo + 0.5 * h);

        const auto cube = [](double x) { return x * x * x; };
        const auto quart = [](double x) { return x * x * x * x; };
        prof.I0 += pc.a * h + pc.b * 0.5 * (pc.t_hi * pc.t_hi - pc.t_lo * pc.t_lo) +
                   pc.c * (cube(pc.t_hi) - cube(pc.t_lo)) / 3.0;
        prof.I1 += pc.a * 0.5 * (pc.t_hi * pc.t_hi - pc.t_lo * pc.t_lo) +
                   pc.b * (cube(pc.t_hi) - cube(pc.t_lo)) / 3.0 +
                   pc.c * 0.25 * (quart(pc.t_hi) - quart(pc.t_lo));
    }

    // J = integral of mu^2/P: rational integrand, Gauss-Legendre per piece
    // with adaptive bisection well past the FEM error budget. The tolerance
    // is 1e-11 relative per piece, floored at 1e-16 of the natural scale of
    // the whole integral (A^2 r / P): a closing sliver contributes below any
    // achievable relative accuracy of J, and chasing its own 1e-11 would push
    // the refinement beneath the rounding noise of the fitted coefficients.
    const double j_scale = prof.area * prof.area * r / prof.perimeter + 1e-300;
    for (const auto& pc : prof.pieces) {
        const auto integrand = [&pc](double t) {
            const double m = pc.a + t * (pc.b + t * pc.c);
            const double per = pc.p + t * pc.q;
            if (per <= 1e-300) return 0.0; // closing corner: mu^2/P -> 0
            return m * m / per;
        };
        const double first = detail::gauss16(integrand, pc.t_lo, pc.t_hi);
        const double tol = std::max(1e-11 * std::abs(first), 1e-16 * j_scale);
        prof.J += detail::adaptive_gauss16(integrand, pc.t_lo, pc.t_hi, tol);
    }

    prof.t_bar = prof.area / prof.perimeter;
    prof.s_bar = prof.mu(prof.t_bar) / prof.perimeter;
    return prof;
}

/// Distance-function moments by the coarea chain:
/// m1 = integral of d(x, boundary) = I0,  m2 = integral of d^2 = 2*I1.
inline std::pair<double, double> distance_moments(const InnerParallelProfile& prof) {
    return {prof.I0, 2.0 * prof.I1};
}

} // namespace robinlab
