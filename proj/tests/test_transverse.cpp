#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plate/quadrature.hpp"
#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

using namespace plate;
using transverse::theta;
using Cplx = plate::Complex;

TEST_CASE("theta values and orthonormality") {
    CHECK(theta(1, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(theta(2, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS(theta(0, 0.3));

    // high-order Gauss quadrature oracle for ∫ θ_p θ_q
    for (int p = 1; p <= 8; ++p)
        for (int q = p; q <= 8; ++q) {
            const double ip = quad::integrate_panels(
                [&](double y) { return theta(p, y) * theta(q, y); }, 0.0, 1.0,
                16, 12);
            CHECK(ip == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("theta derivatives by finite differences") {
    const double h = 1e-6;
    for (int p : {1, 3}) {
        for (double y : {0.2, 0.7}) {
            const double fd = (theta(p, y + h) - theta(p, y - h)) / (2 * h);
            CHECK(theta(p, y, 1) == doctest::Approx(fd).epsilon(1e-8));
            const double fd3 = (theta(p, y + h, 2) - theta(p, y - h, 2)) / (2 * h);
            CHECK(theta(p, y, 3) == doctest::Approx(fd3).epsilon(1e-7));
        }
    }
}

TEST_CASE("clamped a-basis vanishes at y=0 with its derivative") {
    for (Cplx lam : {Cplx(0.7, 0.3), Cplx(0.0, 2.0), Cplx(4.0, 0.0)}) {
        auto b = transverse::basis_clamped_a(lam, 5.0, 0.0);
        CHECK(std::abs(b.f1[0]) < 1e-14);
        CHECK(std::abs(b.f1[1]) < 1e-14);
        CHECK(std::abs(b.f2[0]) < 1e-14);
        CHECK(std::abs(b.f2[1]) < 1e-14);
    }
}

TEST_CASE("a-basis functions satisfy the symbol ODE") {
    // (λ² + d_yy)² φ = k⁴ φ  ⇔  φ'''' = -2λ²φ'' + (k⁴-λ⁴)φ; checked with a
    // finite-difference fourth derivative.
    const double k = 4.2;
    const Cplx lam(1.1, 0.6);
    const double h = 1e-3, y = 0.37;
    auto at = [&](double yy) { return transverse::basis_clamped_a(lam, k, yy); };
    auto f4 = [&](auto get) {
        return (get(at(y - 2 * h)) - 4.0 * get(at(y - h)) + 6.0 * get(at(y)) -
                4.0 * get(at(y + h)) + get(at(y + 2 * h))) / (h * h * h * h);
    };
    auto b = at(y);
    const Cplx k4 = std::pow(k, 4), l2 = lam * lam, l4 = l2 * l2;
    const Cplx lhs1 = f4([](const transverse::BasisPair& v) { return v.f1[0]; });
    const Cplx rhs1 = -2.0 * l2 * b.f1[2] + (k4 - l4) * b.f1[0];
    CHECK(std::abs(lhs1 - rhs1) < 1e-4 * (1.0 + std::abs(rhs1)));
    const Cplx lhs2 = f4([](const transverse::BasisPair& v) { return v.f2[0]; });
    const Cplx rhs2 = -2.0 * l2 * b.f2[2] + (k4 - l4) * b.f2[0];
    CHECK(std::abs(lhs2 - rhs2) < 1e-4 * (1.0 + std::abs(rhs2)));
}

TEST_CASE("a-basis wronskian at 1 equals the dispersion determinant") {
    // two code paths: basis evaluation vs the closed-form determinant
    const double k = 5.0;
    const double eta = std::sqrt(k * k - kPi * kPi);
    const Cplx lam(0.0, eta);
    auto b = transverse::basis_clamped_a(lam, k, 1.0);
    const Cplx wr = b.f1[0] * b.f2[1] - b.f2[0] * b.f1[1];
    const Cplx det = transverse::det_clamped_entire(lam, k);
    CHECK(std::abs(wr - det) < 1e-10 * std::max(1.0, std::abs(det)));
}

TEST_CASE("a-basis continuous into the b-basis limit") {
    const double k = 3.0;
    const Cplx lam_near = k * (1.0 + 1e-9);
    const Cplx lam_on = k;
    for (double y : {0.3, 0.8, 1.0}) {
        auto a = transverse::basis_clamped_a(lam_near, k, y);
        auto b = transverse::basis_clamped_b(lam_on, k, y);
        CHECK(std::abs(a.f1[0] - b.f1[0]) < 1e-5);
        CHECK(std::abs(a.f2[0] - b.f2[0]) < 1e-5);
        CHECK(std::abs(a.f1[1] - b.f1[1]) < 1e-5);
    }
}

TEST_CASE("b-basis determinant facts") {
    // b-basis is degenerate at λ=0
    CHECK_THROWS(transverse::basis_clamped_b(Cplx(0.0, 0.0), 1.0, 0.5));

    auto detB = [](Cplx lam) {
        const Cplx z = std::sqrt(2.0) * lam;
        return z * std::sin(z) - 2.0 + 2.0 * std::cos(z);
    };
    // λ = k = 5 is not a root of √2λ sin(√2λ) = 2 - 2cos(√2λ)
    CHECK(std::abs(detB(Cplx(5.0, 0.0))) > 1e-2);
    // roots of the degenerate dispersion relation: √2λ/2 solves tan x = x
    const double x_root = 4.493409457909064;
    const Cplx lam_root(2.0 * x_root / std::sqrt(2.0), 0.0);
    CHECK(std::abs(detB(lam_root)) < 1e-9);
    // cross-check against basis evaluation at such a root (k = |λ|)
    const double k = std::abs(lam_root);
    auto b = transverse::basis_clamped_b(lam_root, k, 1.0);
    const Cplx wr = b.f1[0] * b.f2[1] - b.f2[0] * b.f1[1];
    CHECK(std::abs(wr) < 1e-9);
    CHECK(std::abs(transverse::det_dispersion(lam_root, k, Bc::Clamped)) < 1e-9);
}

TEST_CASE("branch choice Im sqrt >= 0") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const Cplx z(d(rng), d(rng));
        CHECK(branch_sqrt(z).imag() >= -1e-15);
        CHECK(std::abs(branch_sqrt(z) * branch_sqrt(z) - z) < 1e-10 * std::abs(z));
    }
}

TEST_CASE("dispersion determinant symmetry and reality on the axis") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-8.0, 8.0);
    for (Bc bc : {Bc::SimplySupported, Bc::Clamped}) {
        for (int i = 0; i < 100; ++i) {
            const Cplx lam(d(rng), d(rng));
            const Cplx f1 = transverse::det_dispersion(lam, 5.0, bc);
            const Cplx f2 = transverse::det_dispersion(-lam, 5.0, bc);
            CHECK(std::abs(f1 - f2) <= 1e-12 * std::max(1.0, std::abs(f1)));
        }
    }
    // clamped determinant real on λ = iτ and equal to h_k
    for (double tau : {0.1, 0.35, 0.52, 0.83, 0.99}) {
        const double k = 6.0;
        const Cplx det = transverse::det_clamped_entire(Cplx(0.0, tau * k), k);
        CHECK(std::abs(det.imag()) <= 1e-12 * std::max(1.0, std::abs(det)));
        CHECK(det.real() ==
              doctest::Approx(transverse::h_clamped(k, tau)).epsilon(1e-12));
    }
}

TEST_CASE("dispersion determinant values") {
    // clamped λ=0 at the first threshold
    const double k1 = 4.730040744862704;
    CHECK(std::abs(transverse::det_dispersion(Cplx(0.0, 0.0), k1, Bc::Clamped)) <
          1e-8);
    // simply supported: first factor vanishes at λ = i√(k²-π²)
    const double k = 5.0;
    const Cplx lam(0.0, std::sqrt(k * k - kPi * kPi));
    CHECK(std::abs(transverse::det_dispersion(lam, k, Bc::SimplySupported)) <
          1e-12);
}

TEST_CASE("kernel vectors") {
    const double k = 6.0;
    auto etas = spectrum::clamped_etas(k);
    REQUIRE(!etas.empty());
    const Cplx lam(0.0, etas[0]);
    auto kv = transverse::kernel_vector(lam, k, Bc::Clamped);
    CHECK(!kv.degenerate);
    CHECK(kv.residual < 1e-8);
    // residual of the boundary matrix action
    auto A = transverse::boundary_matrix(lam, k, Bc::Clamped);
    Eigen::Vector2cd v(kv.c1, kv.c2);
    CHECK((A * v).norm() < 1e-8 * std::max(1.0, A.norm()));
    // not an eigenvalue
    CHECK_THROWS_AS(transverse::kernel_vector(Cplx(0.3, 0.2), k, Bc::Clamped),
                    NotAnEigenvalue);
}

TEST_CASE("degenerate kernel at the forced double point") {
    // k = 2π ∈ K via (m,n) = (3,1); λ = π√5 kills the whole matrix
    const double k = 2.0 * kPi;
    const Cplx lam(kPi * std::sqrt(5.0), 0.0);
    auto kv = transverse::kernel_vector(lam, k, Bc::Clamped);
    CHECK(kv.degenerate);
    CHECK(kv.dimension == 2);
}

TEST_CASE("simply supported profile reduces to theta") {
    const double k = 5.0;
    const Cplx lam(0.0, std::sqrt(k * k - kPi * kPi));
    transverse::ModeProfile phi(lam, k, Bc::SimplySupported);
    // proportional to θ_1
    const Cplx r = phi.eval(0.3) / theta(1, 0.3);
    for (double y : {0.1, 0.45, 0.77})
        CHECK(std::abs(phi.eval(y) - r * theta(1, y)) < 1e-12);
}

TEST_CASE("clamped mode profile satisfies the essential conditions") {
    const double k = 6.0;
    auto etas = spectrum::clamped_etas(k);
    transverse::ModeProfile phi(Cplx(0.0, etas[0]), k, Bc::Clamped);
    CHECK(std::abs(phi.eval(0.0)) < 1e-10);
    CHECK(std::abs(phi.eval(1.0)) < 1e-10);
    CHECK(std::abs(phi.eval(0.0, 1)) < 1e-10);
    CHECK(std::abs(phi.eval(1.0, 1)) < 1e-10);
    // flux normalization
    phi.normalize_flux();
    const double E = phi.flux_energy();
    CHECK(4.0 * etas[0] * E == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("symbol solve: trivial, beam oracle, convergence") {
    const double k = 1.0;
    transverse::HermiteGrid1D grid(64);
    transverse::SymbolOperator op(k, Bc::Clamped, grid);

    SUBCASE("zero source gives zero") {
        auto sol = op.solve(Cplx(0.0, 2.0 * k),
                            [](double) { return Cplx(0.0, 0.0); });
        CHECK(sol.dofs().norm() < 1e-14);
    }

    SUBCASE("clamped beam oracle at lambda 0") {
        // φ'''' - φ = 1 with clamped ends: particular -1 plus the
        // cosh/cos family; solve the 4x4 system for the constants.
        auto sol = op.solve(Cplx(0.0, 0.0), [](double) { return Cplx(1.0, 0.0); });
        Eigen::Matrix4d A;
        Eigen::Vector4d rhs;
        auto row = [&](int r, double y, bool deriv) {
            if (!deriv)
                A.row(r) << std::cosh(y), std::sinh(y), std::cos(y), std::sin(y);
            else
                A.row(r) << std::sinh(y), std::cosh(y), -std::sin(y), std::cos(y);
        };
        row(0, 0.0, false); row(1, 0.0, true);
        row(2, 1.0, false); row(3, 1.0, true);
        rhs << 1.0, 0.0, 1.0, 0.0;
        Eigen::Vector4d c = A.fullPivLu().solve(rhs);
        auto exact = [&](double y) {
            return -1.0 + c(0) * std::cosh(y) + c(1) * std::sinh(y) +
                   c(2) * std::cos(y) + c(3) * std::sin(y);
        };
        for (double y : {0.2, 0.5, 0.9})
            CHECK(std::abs(sol.eval(y) - exact(y)) < 1e-6);
    }

    SUBCASE("manufactured solution: H2 error ratio near 4 per halving") {
        // φ_ex = sin²(πy) satisfies the clamped conditions
        const Cplx lam(0.4, 0.2);
        auto phi_ex = [](double y, int d) -> double {
            const double s = std::sin(kPi * y), c = std::cos(kPi * y);
            switch (d) {
                case 0: return s * s;
                case 1: return 2.0 * kPi * s * c;
                case 2: return 2.0 * kPi * kPi * (c * c - s * s);
                case 3: return -8.0 * kPi * kPi * kPi * s * c;
                default: return -8.0 * std::pow(kPi, 4) * (c * c - s * s);
            }
        };
        const Cplx l2c = lam * lam;
        auto rhs = [&](double y) {
            return phi_ex(y, 4) + 2.0 * l2c * phi_ex(y, 2) +
                   (l2c * l2c - std::pow(k, 4)) * phi_ex(y, 0);
        };
        std::vector<double> errs;
        for (int ne : {16, 32, 64}) {
            transverse::HermiteGrid1D g(ne);
            transverse::SymbolOperator o(k, Bc::Clamped, g);
            auto sol = o.solve(lam, rhs);
            errs.push_back(std::sqrt(std::abs(quad::integrate_panels(
                [&](double y) {
                    return std::norm(sol.eval(y, 2) - phi_ex(y, 2));
                },
                0.0, 1.0, 4 * ne, 6))));
        }
        CHECK(errs[0] / errs[1] > 3.4);  // ≈ 4 per halving in H² seminorm
        CHECK(errs[1] / errs[2] > 3.4);
    }

    SUBCASE("coercive regime positivity") {
        // λ = iτ with τ ≥ k: quadratic form of the solution is nonnegative
        transverse::SymbolOperator o(k, Bc::Clamped, grid);
        for (double tau : {1.0, 1.7, 3.0}) {
            auto sol = o.solve(Cplx(0.0, tau),
                               [](double y) { return Cplx(y * (1 - y), 0.0); });
            const Cplx q = o.form_value(Cplx(0.0, tau), sol);
            CHECK(q.real() >= -1e-12);
            CHECK(std::abs(q.imag()) < 1e-12 * std::max(1.0, std::abs(q)));
        }
    }

    SUBCASE("near-eigenvalue solve is rejected") {
        // bisect the sign change of the discrete determinant near iη_1 and
        // solve exactly at the discrete eigenvalue
        const double kk = 6.0;
        auto etas = spectrum::clamped_etas(kk);
        transverse::SymbolOperator o(kk, Bc::Clamped, grid);
        auto sgn = [&](double eta) {
            return o.log_det(Cplx(0.0, eta)).second.real() >= 0 ? 1.0 : -1.0;
        };
        double a = etas[0] - 1e-3, b = etas[0] + 1e-3;
        REQUIRE(sgn(a) * sgn(b) < 0);
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            if (sgn(a) * sgn(m) <= 0) b = m; else a = m;
        }
        CHECK_THROWS_AS(o.solve(Cplx(0.0, 0.5 * (a + b)),
                                [](double) { return Cplx(1.0, 0.0); }),
                        NearSingularSymbol);
    }
}
