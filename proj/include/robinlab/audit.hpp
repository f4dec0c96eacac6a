#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "robinlab/errors.hpp"
#include "robinlab/fem.hpp"
#include "robinlab/geometry.hpp"
#include "robinlab/one_dim.hpp"
#include "robinlab/profile.hpp"

namespace robinlab {

/// First positive zero of the Bessel function J0; the disk value of the
/// scale-invariant eigenvalue functional lambda*r^2.
inline constexpr double kBesselJ01 = 2.404825557695773;

/// Explicit constants of the quantitative inequalities, kept with n as a
/// free parameter (all shapes here are planar, n = 2). The K2 bracket factor
/// is exponentiated by p; p = 2 and p = 4 variants genuinely differ, so both
/// are reported (see eigen_sandwich_lower_p4 in the audit).
struct AuditConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double K1 = 0.0;
    double K2_p2 = 0.0;
    double K2_p4 = 0.0;
};

inline AuditConstants constants(int n, double beta, double r) {
    if (n < 2) throw BadParameter("dimension must be >= 2");
    if (!(beta > 0.0)) throw BadParameter("beta must be positive");
    if (!(r > 0.0)) throw BadParameter("inradius must be positive");
    const double pi = std::acos(-1.0);
    const double nd = n;
    AuditConstants c;
    c.C1 = (nd + 1.0) / (3.0 * nd * (2.0 * nd - 1.0));
    c.C2 = 1.0 / (8.0 * 81.0 * nd * nd * nd);
    c.C3 = 1.0 / (2.0 * 81.0 * pi * (2.0 * nd - 1.0) * nd * nd * nd);
    c.K1 = (pi * pi / 2.0) *
           std::sqrt(1.0 + (4.0 * beta * beta / (pi * pi)) *
                               (r * r + (pi * pi / (4.0 * beta)) * r));
    const double bracket = (pi * pi / 4.0) / (1.0 + pi * pi * nd / (4.0 * beta * r));
    c.K2_p2 = c.C3 * bracket * bracket;
    c.K2_p4 = c.C3 * bracket * bracket * bracket * bracket;
    return c;
}

enum class AuditStatus { Pass, PassWithinBudget, Fail };

inline std::string to_string(AuditStatus s) {
    switch (s) {
        case AuditStatus::Pass: return "PASS";
        case AuditStatus::PassWithinBudget: return "PASS_WITHIN_BUDGET";
        case AuditStatus::Fail: return "FAIL";
    }
    return "unknown";
}

/// One audited inequality, normalized to the claim lhs <= rhs, so
/// margin = rhs - lhs is the claimed-direction slack. FAIL only when the
/// margin dips below the propagated numerical budget.
struct AuditEntry {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double error_budget = 0.0;
    AuditStatus status = AuditStatus::Pass;
    bool gating = true;
};

struct InequalityAuditRecord {
    std::vector<AuditEntry> entries;

    bool has_fail() const {
        for (const auto& e : entries)
            if (e.gating && e.status == AuditStatus::Fail) return true;
        return false;
    }

    const AuditEntry& find(const std::string& id) const {
        for (const auto& e : entries)
            if (e.id == id) return e;
        throw BadParameter("no audit entry with id " + id);
    }
};

/// Everything the audit evaluates on one shape at one beta: exact geometry,
/// profile integrals, converged FEM functionals, 1D eigenvalues at the two
/// comparison lengths, and the scale-invariant composites.
struct FunctionalReport {
    double beta = 0.0;
    ShapeMetrics shape;
    InnerParallelProfile profile;
    RobinSpectralResult T_robin;
    RobinSpectralResult lambda_robin;
    RobinSpectralResult T_dirichlet;
    RobinSpectralResult M_dirichlet;
    double m1 = 0.0;        // integral of d(x, boundary)
    double m2 = 0.0;        // integral of d^2
    double t0 = 0.0;        // sqrt(2 M)
    double nu1_at_s0 = 0.0; // nu1(beta, |Omega|/P)
    double nu1_at_t0 = 0.0; // nu1(beta, t0)
    double makai = 0.0;     // T_beta / (r^2 |Omega|)
    double polya_T = 0.0;   // T_beta P^2 / |Omega|^3
    double polya_L = 0.0;   // lambda_beta |Omega|^2 / P^2
};

/// Dirichlet solves are beta-independent; batteries sweeping beta on a fixed
/// shape share them through this cache, filled on first use.
struct DirichletCache {
    RobinSpectralResult T;
    RobinSpectralResult M;
    bool filled = false;
};

inline FunctionalReport compute_report(const ConvexPolygon& poly, double beta, int fem_levels,
                                       DirichletCache* shared_dirichlet = nullptr) {
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    FunctionalReport rep;
    rep.beta = beta;
    rep.shape = metrics(poly);
    rep.profile = parallel_profile(poly);
    std::tie(rep.m1, rep.m2) = distance_moments(rep.profile);

    rep.T_robin = robin_torsion(poly, beta, fem_levels);
    rep.lambda_robin = robin_eigenvalue(poly, beta, fem_levels);
    if (shared_dirichlet && shared_dirichlet->filled) {
        rep.T_dirichlet = shared_dirichlet->T;
        rep.M_dirichlet = shared_dirichlet->M;
    } else {
        std::tie(rep.T_dirichlet, rep.M_dirichlet) = dirichlet_torsion(poly, fem_levels);
        if (shared_dirichlet) {
            shared_dirichlet->T = rep.T_dirichlet;
            shared_dirichlet->M = rep.M_dirichlet;
            shared_dirichlet->filled = true;
        }
    }

    rep.t0 = std::sqrt(2.0 * rep.M_dirichlet.value);
    rep.nu1_at_s0 = nu1(beta, rep.profile.t_bar).nu1;
    rep.nu1_at_t0 = nu1(beta, rep.t0).nu1;

    const double a0 = rep.shape.area;
    const double per = rep.shape.perimeter;
    const double r = rep.shape.inradius;
    rep.makai = rep.T_robin.value / (r * r * a0);
    rep.polya_T = rep.T_robin.value * per * per / (a0 * a0 * a0);
    rep.polya_L = rep.lambda_robin.value * a0 * a0 / (per * per);
    return rep;
}

namespace detail {

inline AuditStatus classify(double margin, double budget) {
    if (margin < -budget) return AuditStatus::Fail;
    if (margin < 0.0) return AuditStatus::PassWithinBudget;
    return AuditStatus::Pass;
}

inline void push_entry(InequalityAuditRecord& rec, std::string id, double lhs, double rhs,
                       double budget, bool gating = true) {
    AuditEntry e;
    e.id = std::move(id);
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.error_budget = budget;
    e.status = classify(e.margin, budget);
    e.gating = gating;
    rec.entries.push_back(std::move(e));
}

/// Budget of an exact-geometry claim: rounding noise only.
inline double geometry_budget(double lhs, double rhs) {
    return 1e-12 * (std::abs(lhs) + std::abs(rhs));
}

/// Budget of a profile-backed claim (fitted coefficients, quadrature).
inline double profile_budget(double lhs, double rhs) {
    return 1e-9 * (std::abs(lhs) + std::abs(rhs));
}

/// d nu1 / d s0 by central difference; propagates the M budget through
/// t0 = sqrt(2M).
inline double nu1_s0_sensitivity(double beta, double s0) {
    const double h = 1e-6 * s0;
    return (nu1(beta, s0 + h).nu1 - nu1(beta, s0 - h).nu1) / (2.0 * h);
}

} // namespace detail

/// Audits every inequality chain in scope on one shape. FAIL entries are
/// data, not errors. FEM-backed budgets are first-order propagated component
/// estimates with a conservative factor 2.
inline std::pair<FunctionalReport, InequalityAuditRecord> audit(
    const ConvexPolygon& poly, double beta, int fem_levels,
    DirichletCache* shared_dirichlet = nullptr) {
    FunctionalReport rep = compute_report(poly, beta, fem_levels, shared_dirichlet);
    InequalityAuditRecord rec;

    const double a0 = rep.shape.area;
    const double per = rep.shape.perimeter;
    const double r = rep.shape.inradius;
    const double rem_R = rep.shape.remainder_R;
    const double rem_A = rep.shape.remainder_A;
    const double T = rep.T_robin.value;
    const double lam = rep.lambda_robin.value;
    const double TD = rep.T_dirichlet.value;
    const double MD = rep.M_dirichlet.value;
    const double slab = 1.0 / 3.0 + 1.0 / (r * beta); // slab limit of both composites
    const AuditConstants cst = constants(2, beta, r);
    const double pi = std::acos(-1.0);
    const double explicit_cap = (pi * pi / 4.0) / (1.0 + 2.0 / (r * beta));

    const double bT = error_budget(rep.T_robin);
    const double bL = error_budget(rep.lambda_robin);
    const double bTD = error_budget(rep.T_dirichlet);
    const double bMD = error_budget(rep.M_dirichlet);
    const double b_nu_s0 = 1e-10 * rep.nu1_at_s0;
    const double b_nu_t0 =
        1e-10 * rep.nu1_at_t0 +
        std::abs(detail::nu1_s0_sensitivity(beta, rep.t0)) * bMD / std::sqrt(2.0 * MD);

    using detail::push_entry;

    // Distance-moment upper bound and the profile lower bound: the
    // geometry-only bracket that must contain the FEM torsion.
    push_entry(rec, "dist_upper", T, rep.m2 + 2.0 * rep.m1 / beta, 2.0 * bT);
    push_entry(rec, "makai_upper", rep.makai, slab, 2.0 * bT / (r * r * a0));
    push_entry(rec, "polya_lower", slab, rep.polya_T, 2.0 * bT * per * per / (a0 * a0 * a0));
    push_entry(rec, "profile_lower", rep.profile.J + a0 * a0 / (beta * per), T,
               2.0 * (bT + 1e-10 * rep.profile.J));

    // Quantitative sandwich around the slab value, torsion side.
    const double makai_deficit = slab - rep.makai;
    const double b_makai = 2.0 * bT / (r * r * a0);
    push_entry(rec, "makai_sandwich_upper", makai_deficit, 2.0 * slab * rem_R, b_makai);
    push_entry(rec, "makai_sandwich_lower", cst.C1 * rem_R, makai_deficit, b_makai);

    const double polya_excess = rep.polya_T - slab;
    const double b_polya = 2.0 * bT * per * per / (a0 * a0 * a0);
    push_entry(rec, "polya_sandwich_upper", polya_excess, 3.0 * slab * rem_R, b_polya);
    push_entry(rec, "polya_sandwich_lower", cst.C2 * rem_R * rem_R * rem_R, polya_excess,
               b_polya);

    // Eigenvalue chain: 1D comparison at s0 = |Omega|/P and t0 = sqrt(2M).
    push_entry(rec, "eigen_upper", lam, rep.nu1_at_s0, 2.0 * (bL + b_nu_s0));
    push_entry(rec, "eigen_lower_t0", rep.nu1_at_t0, lam, 2.0 * (bL + b_nu_t0));

    const double eigen_deficit = (rep.nu1_at_s0 - lam) * a0 * a0 / (per * per);
    const double b_eigen = 2.0 * (bL + b_nu_s0) * a0 * a0 / (per * per);
    const double r4 = rem_R * rem_R * rem_R * rem_R;
    push_entry(rec, "eigen_sandwich_upper", eigen_deficit, cst.K1 * rem_R, b_eigen);
    push_entry(rec, "eigen_sandwich_lower", cst.K2_p2 * r4, eigen_deficit, b_eigen);
    // The stated constant carries exponent 4 where the final display of its
    // derivation carries 2; recorded side by side, only p = 2 gates.
    push_entry(rec, "eigen_sandwich_lower_p4", cst.K2_p4 * r4, eigen_deficit, b_eigen,
               /*gating=*/false);

    push_entry(rec, "eigen_polya", cst.K2_p2 * r4, explicit_cap - rep.polya_L,
               2.0 * bL * a0 * a0 / (per * per));
    push_entry(rec, "eigen_explicit", lam, explicit_cap * per * per / (a0 * a0), 2.0 * bL);
    const double hp = (pi / 2.0) * (pi / 2.0) /
                      ((r + (pi / 2.0) / beta) * (r + (pi / 2.0) / beta));
    push_entry(rec, "hersch_protter_robin", hp, lam, 2.0 * bL);

    // Torsion-maximum chain: 2M >= 3T/|Omega| >= |Omega|^2/P^2.
    push_entry(rec, "torsion_max_chain_1", 3.0 * TD / a0, 2.0 * MD,
               2.0 * (2.0 * bMD + 3.0 * bTD / a0));
    push_entry(rec, "torsion_max_chain_2", a0 * a0 / (per * per), 3.0 * TD / a0,
               2.0 * 3.0 * bTD / a0);

    // Asymmetry ratios: positivity claims; the values feed sweep trend data.
    push_entry(rec, "asym_polya_T", 0.0, polya_excess / rem_A, b_polya / rem_A);
    push_entry(rec, "asym_polya_L", 0.0, (explicit_cap - rep.polya_L) / rem_A,
               2.0 * bL * a0 * a0 / (per * per) / rem_A);

    // Geometry-only entries.
    push_entry(rec, "geom_convex_lower", 1.0, per * r / a0,
               detail::geometry_budget(1.0, per * r / a0));
    push_entry(rec, "geom_convex_upper", per * r / a0, 2.0,
               detail::geometry_budget(per * r / a0, 2.0));

    const double mu_tbar = rep.profile.mu(rep.profile.t_bar);
    const double per_tbar = rep.profile.P(rep.profile.t_bar);
    push_entry(rec, "geom_q1", (rem_R / 12.0) * a0, mu_tbar,
               detail::profile_budget((rem_R / 12.0) * a0, mu_tbar));
    push_entry(rec, "geom_q2", per_tbar, per / (1.0 + rem_R / 2.0),
               detail::profile_budget(per_tbar, per / (1.0 + rem_R / 2.0)));

    // Steiner bound and the width-profile cap, at a worst sampled offset.
    double worst_slack = std::numeric_limits<double>::infinity();
    double st_lhs = 0.0, st_rhs = 0.0;
    double worst_cap = std::numeric_limits<double>::infinity();
    double cap_lhs = 0.0, cap_rhs = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = r * (i + 0.5) / 100.0;
        const double mu_t = rep.profile.mu(t);
        const double p_t = rep.profile.P(t);
        if (mu_t - (a0 - per * t) < worst_slack) {
            worst_slack = mu_t - (a0 - per * t);
            st_lhs = a0 - per * t;
            st_rhs = mu_t;
        }
        if (p_t * (r - t) - mu_t < worst_cap) {
            worst_cap = p_t * (r - t) - mu_t;
            cap_lhs = mu_t;
            cap_rhs = p_t * (r - t);
        }
    }
    push_entry(rec, "geom_steiner", st_lhs, st_rhs, detail::profile_budget(st_lhs, st_rhs));
    push_entry(rec, "geom_mu_upper", cap_lhs, cap_rhs, detail::profile_budget(cap_lhs, cap_rhs));

    push_entry(rec, "geom_perimeter_diameter", per, pi * rep.shape.diameter,
               detail::geometry_budget(per, pi * rep.shape.diameter));
    push_entry(rec, "geom_width_upper", r, rep.shape.min_width / 2.0,
               detail::geometry_budget(r, rep.shape.min_width / 2.0));
    push_entry(rec, "geom_width_lower", rep.shape.min_width / 3.0, r,
               detail::geometry_budget(rep.shape.min_width / 3.0, r));

    return {std::move(rep), std::move(rec)};
}

/// Dirichlet-limit audit of the four classical functionals; the eigenvalue
/// is computed with a large-beta proxy (beta = 1e6), whose bias is absorbed
/// into a relative allowance on those budgets.
inline InequalityAuditRecord dirichlet_audit(const ConvexPolygon& poly, int fem_levels) {
    const ShapeMetrics sm = metrics(poly);
    const auto [t_res, m_res] = dirichlet_torsion(poly, fem_levels);
    const RobinSpectralResult lam_res = robin_eigenvalue(poly, 1e6, fem_levels);

    const double a0 = sm.area;
    const double per = sm.perimeter;
    const double r = sm.inradius;
    const double TD = t_res.value;
    const double lam = lam_res.value;
    const double pi = std::acos(-1.0);
    const double bTD = error_budget(t_res);
    const double bL = error_budget(lam_res) + 1e-4 * lam; // large-beta proxy allowance

    InequalityAuditRecord rec;
    using detail::push_entry;

    const double polya_T = TD * per * per / (a0 * a0 * a0);
    const double b_polya = 2.0 * bTD * per * per / (a0 * a0 * a0);
    push_entry(rec, "dirichlet_polya_lower", 1.0 / 3.0, polya_T, b_polya);
    push_entry(rec, "dirichlet_polya_upper", polya_T, 2.0 / 3.0, b_polya);

    const double eig_P = lam * a0 * a0 / (per * per);
    const double b_eig_P = 2.0 * bL * a0 * a0 / (per * per);
    push_entry(rec, "dirichlet_eigen_lower", pi * pi / 16.0, eig_P, b_eig_P);
    push_entry(rec, "dirichlet_eigen_upper", eig_P, pi * pi / 4.0, b_eig_P);

    const double makai_T = TD / (r * r * a0);
    const double b_makai = 2.0 * bTD / (r * r * a0);
    push_entry(rec, "dirichlet_makai_lower", 1.0 / 8.0, makai_T, b_makai);
    push_entry(rec, "dirichlet_makai_upper", makai_T, 1.0 / 3.0, b_makai);

    const double eig_r = lam * r * r;
    const double b_eig_r = 2.0 * bL * r * r;
    push_entry(rec, "dirichlet_inradius_lower", pi * pi / 4.0, eig_r, b_eig_r);
    push_entry(rec, "dirichlet_inradius_upper", eig_r, kBesselJ01 * kBesselJ01, b_eig_r);

    return rec;
}

} // namespace robinlab
