// Tests for the P1 finite-element layer: exact element matrices on a
// reference triangle, global assembly identities, Richardson extrapolation,
// and the Robin/Dirichlet solvers against closed-form unit-square references.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "robinlab/robinlab.hpp"

namespace rl = robinlab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

rl::ConvexPolygon unit_square() {
    return rl::validate_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

// Dirichlet torsion of the unit square by double Fourier series:
// T = (64/pi^6) sum over odd m,n of 1 / (m^2 n^2 (m^2 + n^2)).
double square_dirichlet_torsion_series() {
    double s = 0.0;
    for (int m = 399; m >= 1; m -= 2)
        for (int n = 399; n >= 1; n -= 2)
            s += 1.0 / (static_cast<double>(m) * m * n * n * (static_cast<double>(m) * m + static_cast<double>(n) * n));
    return 64.0 / std::pow(kPi, 6) * s;
}

// Torsion function of the unit square at its center:
// u(1/2,1/2) = (16/pi^4) sum over odd m,n of
//   (-1)^((m-1)/2 + (n-1)/2) / (m n (m^2 + n^2)).
double square_dirichlet_max_series() {
    double s = 0.0;
    for (int m = 399; m >= 1; m -= 2)
        for (int n = 399; n >= 1; n -= 2) {
            const double sign = (((m - 1) / 2 + (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
            s += sign / (static_cast<double>(m) * n * (static_cast<double>(m) * m + static_cast<double>(n) * n));
        }
    return 16.0 / std::pow(kPi, 4) * s;
}

} // namespace

TEST_CASE("element matrices on the reference triangle", "[fem]") {
    rl::TriangleMesh tm;
    tm.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    tm.triangles = {{0, 1, 2}};
    tm.boundary_segments = {{0, 1}, {1, 2}, {2, 0}};

    const auto sys = rl::assemble(tm);
    REQUIRE(sys.stiffness.rows() == 3);
    CHECK_FALSE(sys.dirichlet);

    const Eigen::MatrixXd K = Eigen::MatrixXd(sys.stiffness);
    Eigen::MatrixXd Kref(3, 3);
    Kref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    Kref *= 0.5;
    CHECK((K - Kref).cwiseAbs().maxCoeff() <= 1e-14);

    const Eigen::MatrixXd M = Eigen::MatrixXd(sys.mass);
    Eigen::MatrixXd Mref(3, 3);
    Mref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    Mref /= 24.0;
    CHECK((M - Mref).cwiseAbs().maxCoeff() <= 1e-14);

    for (int i = 0; i < 3; ++i) CHECK(sys.load(i) == Catch::Approx(1.0 / 6.0).epsilon(1e-14));

    const double rt2 = std::sqrt(2.0);
    const Eigen::MatrixXd B = Eigen::MatrixXd(sys.boundary_mass);
    Eigen::MatrixXd Bref(3, 3);
    Bref << 4.0, 1.0, 1.0,
            1.0, 2.0 + 2.0 * rt2, rt2,
            1.0, rt2, 2.0 + 2.0 * rt2;
    Bref /= 6.0;
    CHECK((B - Bref).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(B.sum() == Catch::Approx(2.0 + rt2).epsilon(1e-13));
}

TEST_CASE("global assembly identities on a square mesh", "[fem]") {
    const auto mesh = rl::triangulate(unit_square(), 0.5);
    const auto sys = rl::assemble(mesh);

    // Row sums of the stiffness matrix vanish (constants are in the kernel),
    // the load and mass integrate 1 to the area, the boundary mass to the
    // perimeter.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.stiffness.rows());
    CHECK((sys.stiffness * ones).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sys.load.sum() == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(Eigen::MatrixXd(sys.mass).sum() == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(Eigen::MatrixXd(sys.boundary_mass).sum() == Catch::Approx(4.0).epsilon(1e-13));

    // Dirichlet assembly eliminates exactly the boundary nodes.
    const auto dsys = rl::assemble_dirichlet(mesh);
    CHECK(dsys.dirichlet);
    int eliminated = 0;
    for (int d : dsys.dof_of_node) eliminated += (d < 0);
    CHECK(eliminated == static_cast<int>(
        [&] {
            std::set<int> b;
            for (const auto& s : mesh.boundary_segments) { b.insert(s[0]); b.insert(s[1]); }
            return b.size();
        }()));
    CHECK(dsys.stiffness.rows() == mesh.node_count() - eliminated);
}

TEST_CASE("richardson extrapolation fits and rejections", "[fem]") {
    const auto fit2 = rl::richardson(2.0, 1.25, 1.0625);
    CHECK(fit2.extrapolated == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(fit2.order == Catch::Approx(2.0).epsilon(1e-12));

    const auto fit1 = rl::richardson(3.0, 2.0, 1.5);
    CHECK(fit1.extrapolated == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(fit1.order == Catch::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(rl::richardson(1.0, 1.0, 1.0), rl::NonMonotoneSequence);
    CHECK_THROWS_AS(rl::richardson(1.0, 2.0, 1.5), rl::NonMonotoneSequence);
    CHECK_THROWS_AS(rl::richardson(3.0, 2.0, 1.0), rl::NonMonotoneSequence); // no decay
}

TEST_CASE("error_budget floors the Richardson estimate", "[fem]") {
    rl::RobinSpectralResult r;
    r.value = 10.0;
    r.error_estimate = 1e-3;
    CHECK(rl::error_budget(r) == Catch::Approx(1e-3));
    r.error_estimate = 1e-13;
    CHECK(rl::error_budget(r) == Catch::Approx(10.0 * 1e-11 * 10.0));
}

TEST_CASE("robin torsion on the unit square at beta = 1", "[fem]") {
    const auto res = rl::robin_torsion(unit_square(), 1.0, 3);

    CHECK(res.kind == rl::SpectralKind::RobinTorsion);
    CHECK(res.level == 3);
    REQUIRE(res.level_values.size() == 3);
    REQUIRE(res.level_nodes.size() == 3);
    CHECK(res.level_nodes[0] < res.level_nodes[1]);
    CHECK(res.level_nodes[1] < res.level_nodes[2]);

    // Conforming P1 underestimates the torsional energy, so level values
    // increase monotonically toward T.
    CHECK(res.level_values[0] < res.level_values[1]);
    CHECK(res.level_values[1] < res.level_values[2]);
    CHECK(res.value >= res.finest_value());

    // Two-sided slab bracket: J + A^2/(beta P) <= T <= m2 + 2 m1 / beta,
    // i.e. [0.28125, 0.375] for the unit square at beta = 1.
    const double bud = rl::error_budget(res);
    CHECK(res.value >= 0.28125 - bud);
    CHECK(res.value <= 0.375 + bud);

    CHECK(res.observed_order > 1.5);
    CHECK(res.observed_order < 2.5);

    // The torsion function is positive.
    REQUIRE(res.field.size() > 0);
    CHECK(res.field.minCoeff() > 0.0);
    CHECK(static_cast<int>(res.field_points.size()) == static_cast<int>(res.field.size()));

    CHECK_THROWS_AS(rl::robin_torsion(unit_square(), 0.0, 3), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::robin_torsion(unit_square(), 1.0, 2), rl::BadParameter);
}

TEST_CASE("robin eigenvalue on the unit square at beta = 1", "[fem]") {
    const auto res = rl::robin_eigenvalue(unit_square(), 1.0, 3);

    CHECK(res.kind == rl::SpectralKind::RobinEigenvalue);
    CHECK(res.value > 2.2);
    CHECK(res.value < 3.7);
    CHECK(res.observed_order > 1.5);
    CHECK(res.observed_order < 2.5);

    // Nested P1 spaces give monotonically decreasing Rayleigh quotients.
    CHECK(res.level_values[0] > res.level_values[1]);
    CHECK(res.level_values[1] > res.level_values[2]);

    // Ground state has a fixed sign.
    REQUIRE(res.field.size() > 0);
    Eigen::VectorXd f = res.field;
    if (f.maxCoeff() < 0.0) f = -f;
    CHECK(f.minCoeff() > 0.0);

    // Coarse one-dimensional lower bound nu1-style: lambda >= (pi/2)^2 / (r + (pi/2)/beta)^2.
    const double hp = (kPi / 2.0) * (kPi / 2.0) / std::pow(0.5 + (kPi / 2.0), 2);
    CHECK(res.value >= hp);

    CHECK_THROWS_AS(rl::robin_eigenvalue(unit_square(), -1.0, 3), rl::NonPositiveInput);
    CHECK_THROWS_AS(rl::robin_eigenvalue(unit_square(), 1.0, 1), rl::BadParameter);
}

TEST_CASE("robin solutions degenerate to Dirichlet references as beta grows", "[fem][slow]") {
    const double Tref = square_dirichlet_torsion_series();
    const auto T = rl::robin_torsion(unit_square(), 1e6, 6);
    CHECK(std::abs(T.value - Tref) <= 5e-3 * Tref);

    const double Lref = 2.0 * kPi * kPi;
    const auto L = rl::robin_eigenvalue(unit_square(), 1e6, 6);
    CHECK(std::abs(L.value - Lref) <= 5e-3 * Lref);
}

TEST_CASE("dirichlet torsion of the unit square against Fourier series", "[fem]") {
    const auto [T, M] = rl::dirichlet_torsion(unit_square(), 5);

    CHECK(T.kind == rl::SpectralKind::DirichletTorsion);
    CHECK(M.kind == rl::SpectralKind::DirichletMax);

    const double Tref = square_dirichlet_torsion_series();
    const double Mref = square_dirichlet_max_series();
    CHECK(Tref == Catch::Approx(0.0351444).epsilon(1e-4));
    CHECK(Mref == Catch::Approx(0.0736714).epsilon(1e-3));

    CHECK(std::abs(T.value - Tref) <= 1e-3 * Tref);
    CHECK(std::abs(M.value - Mref) <= 5e-3 * Mref);

    // Torsion maximum controls the torsion integral: T <= A * M.
    CHECK(T.value <= M.value * 1.0 * (1.0 + 1e-6));

    CHECK_THROWS_AS(rl::dirichlet_torsion(unit_square(), 2), rl::BadParameter);
}

TEST_CASE("dirichlet torsion scaling under dilation", "[fem]") {
    const auto [T1, M1] = rl::dirichlet_torsion(unit_square(), 4);
    const auto big = rl::validate_polygon({{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}});
    const auto [T2, M2] = rl::dirichlet_torsion(big, 4);

    // T scales like length^4, M like length^2; the meshes are similar, so
    // the finite-element values scale exactly.
    CHECK(T2.finest_value() == Catch::Approx(16.0 * T1.finest_value()).epsilon(1e-10));
    CHECK(M2.finest_value() == Catch::Approx(4.0 * M1.finest_value()).epsilon(1e-10));
}

TEST_CASE("monotonicity of T and lambda in beta", "[fem]") {
    const auto sq = unit_square();
    double prevT = std::numeric_limits<double>::infinity();
    double prevL = 0.0;
    for (double beta : {0.5, 1.0, 2.0, 10.0, 100.0}) {
        CAPTURE(beta);
        const double T = rl::robin_torsion(sq, beta, 3).value;
        const double L = rl::robin_eigenvalue(sq, beta, 3).value;
        CHECK(T < prevT);
        CHECK(L > prevL);
        prevT = T;
        prevL = L;
    }
}

TEST_CASE("regular 64-gon beats the square eigenvalue at equal area", "[fem]") {
    const auto gon = rl::make_regular_polygon(64, 1.0);
    CHECK(rl::area(gon) == Catch::Approx(1.0).epsilon(1e-12));
    const double Lgon = rl::robin_eigenvalue(gon, 1.0, 3).value;
    const double Lsq = rl::robin_eigenvalue(unit_square(), 1.0, 3).value;
    CHECK(Lgon < Lsq);
}

TEST_CASE("thin rectangle converges with usable order", "[fem][slow]") {
    const auto rect = rl::make_rectangle(0.0625, 1.0);
    const auto m = rl::metrics(rect);

    const auto T = rl::robin_torsion(rect, 2.0, 4);
    const auto L = rl::robin_eigenvalue(rect, 2.0, 4);

    CHECK(T.observed_order >= 1.5);
    CHECK(L.observed_order >= 1.5);

    // The slab comparison is nearly saturated on a 16:1 rectangle:
    // T / (r^2 |Omega| (1/3 + 1/(r beta))) sits in (0.9, 1].
    const double slab = 1.0 / 3.0 + 1.0 / (m.inradius * 2.0);
    const double ratio = T.value / (m.inradius * m.inradius * m.area * slab);
    CHECK(ratio > 0.9);
    CHECK(ratio <= 1.0 + 1e-6);
}
