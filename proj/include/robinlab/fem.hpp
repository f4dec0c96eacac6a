#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "robinlab/errors.hpp"
#include "robinlab/geometry.hpp"
#include "robinlab/mesh.hpp"

namespace robinlab {

/// P1 Galerkin matrices on a TriangleMesh. For Robin problems all nodes are
/// kept; in Dirichlet mode boundary nodes are eliminated and dof_of_node
/// maps them to -1.
struct RobinSystem {
    Eigen::SparseMatrix<double> stiffness;     // A_ij = int grad(phi_i).grad(phi_j)
    Eigen::SparseMatrix<double> mass;          // M_ij = int phi_i phi_j
    Eigen::SparseMatrix<double> boundary_mass; // B_ij = int_boundary phi_i phi_j
    Eigen::VectorXd load;                      // f_i = int phi_i
    std::vector<int> dof_of_node;              // -1 when eliminated
    bool dirichlet = false;
};

enum class SpectralKind { RobinTorsion, RobinEigenvalue, DirichletTorsion, DirichletMax };

inline std::string to_string(SpectralKind k) {
    switch (k) {
        case SpectralKind::RobinTorsion: return "robin_torsion";
        case SpectralKind::RobinEigenvalue: return "robin_eigenvalue";
        case SpectralKind::DirichletTorsion: return "dirichlet_torsion";
        case SpectralKind::DirichletMax: return "dirichlet_max";
    }
    return "unknown";
}

/// A converged FEM functional: Richardson-extrapolated value over the last
/// three refinement levels, with the per-level raw values retained for
/// convergence reports. observed_order is NaN when the level sequence was
/// not monotone (then value = finest, error_estimate = |v3 - v2|).
struct RobinSpectralResult {
    double value = 0.0;
    Eigen::VectorXd field;          // nodal field on the finest mesh (dof numbering)
    std::vector<Vec2> field_points; // node position of each dof, aligned with field
    int level = 0;
    double error_estimate = 0.0;
    double observed_order = std::numeric_limits<double>::quiet_NaN();
    SpectralKind kind = SpectralKind::RobinTorsion;
    std::vector<double> level_values;
    std::vector<int> level_nodes;

    double finest_value() const { return level_values.back(); }
};

/// Audit error budget: Richardson estimate, floored by ten solver residual
/// tolerances (1e-11 relative).
inline double error_budget(const RobinSpectralResult& r) {
    return std::max(r.error_estimate, 10.0 * 1e-11 * std::abs(r.value));
}

struct RichardsonFit {
    double extrapolated = 0.0;
    double order = 0.0;
};

/// Classical three-level fit for values at h, h/2, h/4 assuming v = F + C h^p.
/// Demands strictly monotone values with decaying differences; anything else
/// carries no usable order.
inline RichardsonFit richardson(double v1, double v2, double v3) {
    const double d1 = v1 - v2;
    const double d2 = v2 - v3;
    if (!(d1 * d2 > 0.0)) throw NonMonotoneSequence("level values are not strictly monotone");
    const double ratio = d1 / d2;
    if (!(ratio > 1.0 + 1e-12))
        throw NonMonotoneSequence("level differences do not decay");
    RichardsonFit fit;
    fit.order = std::log2(ratio);
    fit.extrapolated = v3 + (v3 - v2) / (std::exp2(fit.order) - 1.0);
    return fit;
}

namespace detail {

inline RobinSystem assemble_impl(const TriangleMesh& mesh, bool dirichlet) {
    const int n = mesh.node_count();
    std::vector<char> on_boundary(static_cast<size_t>(n), 0);
    for (const auto& s : mesh.boundary_segments) {
        on_boundary[static_cast<size_t>(s[0])] = 1;
        on_boundary[static_cast<size_t>(s[1])] = 1;
    }

    RobinSystem sys;
    sys.dirichlet = dirichlet;
    sys.dof_of_node.assign(static_cast<size_t>(n), -1);
    int ndof = 0;
    for (int i = 0; i < n; ++i)
        if (!dirichlet || !on_boundary[static_cast<size_t>(i)])
            sys.dof_of_node[static_cast<size_t>(i)] = ndof++;

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> ka, km, kb;
    ka.reserve(mesh.triangles.size() * 9);
    km.reserve(mesh.triangles.size() * 9);
    sys.load = Eigen::VectorXd::Zero(ndof);

    for (const auto& t : mesh.triangles) {
        const double a2 = 2.0 * triangle_area(mesh, t);
        if (!(a2 > 0.0)) throw Degenerate("non-positive triangle area in mesh");
        // Edge opposite vertex i; grad(lambda_i) = perp(e_i) / (2 area).
        Vec2 e[3];
        for (int i = 0; i < 3; ++i)
            e[i] = mesh.nodes[static_cast<size_t>(t[static_cast<size_t>((i + 2) % 3)])] -
                   mesh.nodes[static_cast<size_t>(t[static_cast<size_t>((i + 1) % 3)])];
        const double area_t = 0.5 * a2;
        int dof[3];
        for (int i = 0; i < 3; ++i) dof[i] = sys.dof_of_node[static_cast<size_t>(t[static_cast<size_t>(i)])];
        for (int i = 0; i < 3; ++i) {
            if (dof[i] < 0) continue;
            sys.load[dof[i]] += area_t / 3.0;
            for (int j = 0; j < 3; ++j) {
                if (dof[j] < 0) continue;
                ka.emplace_back(dof[i], dof[j], dot(e[i], e[j]) / (2.0 * a2));
                km.emplace_back(dof[i], dof[j], area_t / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    if (!dirichlet) {
        kb.reserve(mesh.boundary_segments.size() * 4);
        for (const auto& s : mesh.boundary_segments) {
            const double len = norm(mesh.nodes[static_cast<size_t>(s[1])] -
                                    mesh.nodes[static_cast<size_t>(s[0])]);
            const int d0 = sys.dof_of_node[static_cast<size_t>(s[0])];
            const int d1 = sys.dof_of_node[static_cast<size_t>(s[1])];
            kb.emplace_back(d0, d0, len / 3.0);
            kb.emplace_back(d1, d1, len / 3.0);
            kb.emplace_back(d0, d1, len / 6.0);
            kb.emplace_back(d1, d0, len / 6.0);
        }
    }

    sys.stiffness.resize(ndof, ndof);
    sys.stiffness.setFromTriplets(ka.begin(), ka.end());
    sys.mass.resize(ndof, ndof);
    sys.mass.setFromTriplets(km.begin(), km.end());
    sys.boundary_mass.resize(ndof, ndof);
    sys.boundary_mass.setFromTriplets(kb.begin(), kb.end());
    return sys;
}

} // namespace detail

inline RobinSystem assemble(const TriangleMesh& mesh) { return detail::assemble_impl(mesh, false); }
inline RobinSystem assemble_dirichlet(const TriangleMesh& mesh) {
    return detail::assemble_impl(mesh, true);
}

/// Sparse SPD solve by LDLT factorization with iterative refinement; the
/// factorization is reused across right-hand sides (inverse power iteration).
/// The matrix must outlive the solver.
class SpdSolver {
  public:
    explicit SpdSolver(const Eigen::SparseMatrix<double>& s) : matrix_(&s) {
        ldlt_.compute(s);
        if (ldlt_.info() != Eigen::Success)
            throw NoConvergence("sparse LDLT factorization failed");
        norm1_ = 0.0; // max absolute column sum, for the backward-error gate
        for (int c = 0; c < s.outerSize(); ++c) {
            double col = 0.0;
            for (Eigen::SparseMatrix<double>::InnerIterator it(s, c); it; ++it)
                col += std::abs(it.value());
            norm1_ = std::max(norm1_, col);
        }
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = ldlt_.solve(b);
        const double bnorm = b.norm();
        for (int k = 0; k < 3; ++k) {
            const Eigen::VectorXd r = b - (*matrix_) * x;
            if (r.norm() <= 1e-13 * (bnorm + norm1_ * x.norm())) break;
            x += ldlt_.solve(r);
        }
        // Normwise backward error; the attainable residual scales with
        // ||S||*||x||, not ||b||, once the matrix norm is boundary-dominated.
        if ((b - (*matrix_) * x).norm() > 1e-11 * (bnorm + norm1_ * x.norm()))
            throw NoConvergence("linear solve backward error above 1e-11");
        return x;
    }

  private:
    const Eigen::SparseMatrix<double>* matrix_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    double norm1_ = 0.0;
};

namespace detail {

/// Smallest eigenpair of S x = lambda M x (both SPD) by inverse power
/// iteration with M-normalization and a Rayleigh-quotient stop.
inline std::pair<double, Eigen::VectorXd> smallest_eigenpair(const Eigen::SparseMatrix<double>& s,
                                                             const Eigen::SparseMatrix<double>& m,
                                                             const Eigen::VectorXd& seed) {
    const SpdSolver solver(s);
    Eigen::VectorXd x = seed;
    x /= std::sqrt(x.dot(m * x));
    double rho_prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
        const Eigen::VectorXd y = solver.solve(m * x);
        x = y / std::sqrt(y.dot(m * y));
        const double rho = x.dot(s * x);
        if (std::abs(rho - rho_prev) <= 1e-11 * rho) {
            if (seed.dot(x) < 0.0) x = -x; // first eigenfunction has a sign
            return {rho, x};
        }
        rho_prev = rho;
    }
    throw NoConvergence("inverse power iteration exceeded 500 iterations");
}

/// Base mesh size: resolve the width direction while keeping fan spokes
/// within a bounded number of sizing refinements.
inline double base_mesh_size(const ShapeMetrics& m) {
    return std::max(0.5 * m.min_width, m.diameter / 16.0);
}

inline std::vector<Vec2> dof_points(const TriangleMesh& mesh, const RobinSystem& sys) {
    std::vector<Vec2> pts;
    pts.reserve(mesh.nodes.size());
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
        if (sys.dof_of_node[i] >= 0) pts.push_back(mesh.nodes[i]);
    return pts;
}

inline void finalize_levels(RobinSpectralResult& res) {
    const size_t count = res.level_values.size();
    const double v1 = res.level_values[count - 3];
    const double v2 = res.level_values[count - 2];
    const double v3 = res.level_values[count - 1];
    try {
        const RichardsonFit fit = richardson(v1, v2, v3);
        res.value = fit.extrapolated;
        res.observed_order = fit.order;
        res.error_estimate = std::abs(fit.extrapolated - v3);
    } catch (const NonMonotoneSequence&) {
        res.value = v3;
        res.observed_order = std::numeric_limits<double>::quiet_NaN();
        res.error_estimate = std::abs(v3 - v2);
    }
}

} // namespace detail

/// Robin torsion T_beta = integral of the solution of -Lap(u) = 1 with
/// du/dn + beta u = 0, computed as f.u (exact for P1) on `levels` nested
/// refinements with Richardson extrapolation over the last three.
inline RobinSpectralResult robin_torsion(const ConvexPolygon& poly, double beta, int levels) {
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    if (levels < 3) throw BadParameter("levels must be >= 3");
    TriangleMesh mesh = triangulate(poly, detail::base_mesh_size(metrics(poly)));
    RobinSpectralResult res;
    res.kind = SpectralKind::RobinTorsion;
    for (int l = 1; l <= levels; ++l) {
        mesh = refine(mesh);
        const RobinSystem sys = assemble(mesh);
        const Eigen::SparseMatrix<double> s = sys.stiffness + beta * sys.boundary_mass;
        const Eigen::VectorXd u = SpdSolver(s).solve(sys.load);
        res.level_values.push_back(sys.load.dot(u));
        res.level_nodes.push_back(mesh.node_count());
        if (l == levels) {
            res.field = u;
            res.field_points = detail::dof_points(mesh, sys);
        }
    }
    res.level = levels;
    detail::finalize_levels(res);
    return res;
}

/// First Robin eigenvalue: smallest lambda of (A + beta B) x = lambda M x.
inline RobinSpectralResult robin_eigenvalue(const ConvexPolygon& poly, double beta, int levels) {
    if (!(beta > 0.0)) throw NonPositiveInput("beta must be positive");
    if (levels < 3) throw BadParameter("levels must be >= 3");
    TriangleMesh mesh = triangulate(poly, detail::base_mesh_size(metrics(poly)));
    RobinSpectralResult res;
    res.kind = SpectralKind::RobinEigenvalue;
    for (int l = 1; l <= levels; ++l) {
        mesh = refine(mesh);
        const RobinSystem sys = assemble(mesh);
        const Eigen::SparseMatrix<double> s = sys.stiffness + beta * sys.boundary_mass;
        auto [lam, x] = detail::smallest_eigenpair(s, sys.mass, sys.load);
        res.level_values.push_back(lam);
        res.level_nodes.push_back(mesh.node_count());
        if (l == levels) {
            res.field = std::move(x);
            res.field_points = detail::dof_points(mesh, sys);
        }
    }
    res.level = levels;
    detail::finalize_levels(res);
    return res;
}

/// Dirichlet torsion function (boundary nodes eliminated): returns both
/// T = integral of u and M = max of u, each Richardson-extrapolated.
inline std::pair<RobinSpectralResult, RobinSpectralResult> dirichlet_torsion(
    const ConvexPolygon& poly, int levels) {
    if (levels < 3) throw BadParameter("levels must be >= 3");
    TriangleMesh mesh = triangulate(poly, detail::base_mesh_size(metrics(poly)));
    RobinSpectralResult t_res, m_res;
    t_res.kind = SpectralKind::DirichletTorsion;
    m_res.kind = SpectralKind::DirichletMax;
    for (int l = 1; l <= levels; ++l) {
        mesh = refine(mesh);
        const RobinSystem sys = assemble_dirichlet(mesh);
        const Eigen::VectorXd u = SpdSolver(sys.stiffness).solve(sys.load);
        t_res.level_values.push_back(sys.load.dot(u));
        m_res.level_values.push_back(u.maxCoeff());
        t_res.level_nodes.push_back(mesh.node_count());
        m_res.level_nodes.push_back(mesh.node_count());
        if (l == levels) {
            t_res.field = u;
            m_res.field = u;
            t_res.field_points = detail::dof_points(mesh, sys);
            m_res.field_points = t_res.field_points;
        }
    }
    t_res.level = m_res.level = levels;
    detail::finalize_levels(t_res);
    detail::finalize_levels(m_res);
    return {t_res, m_res};
}

} // namespace robinlab
