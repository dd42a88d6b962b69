#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plate/quadrature.hpp"
#include "plate/scattering.hpp"
#include "plate/transverse.hpp"

using namespace plate;
using Cplx = plate::Complex;

namespace {

fem::PlateField interpolate(
    const fem::StripMesh& mesh,
    const std::function<Cplx(double, double, int, int)>& u) {
    Eigen::VectorXcd dofs(4 * mesh.n_nodes());
    for (int ix = 0; ix <= mesh.nx(); ++ix)
        for (int iy = 0; iy <= mesh.ny(); ++iy) {
            const double x = mesh.x_of(ix), y = mesh.y_of(iy);
            const int n = mesh.node_id(ix, iy);
            dofs(4 * n + 0) = u(x, y, 0, 0);
            dofs(4 * n + 1) = u(x, y, 1, 0);
            dofs(4 * n + 2) = u(x, y, 0, 1);
            dofs(4 * n + 3) = u(x, y, 1, 1);
        }
    return fem::PlateField(&mesh, dofs);
}

}  // namespace

TEST_CASE("cutoff zeta shape and smoothness") {
    scattering::CutoffSpec z{0.5, 0.45};
    CHECK(scattering::cutoff_zeta(z, 0.0) == 0.0);
    CHECK(scattering::cutoff_zeta(z, 0.3) == 0.0);
    CHECK(scattering::cutoff_zeta(z, 1.2) == 1.0);
    CHECK(scattering::cutoff_zeta(z, -1.2) == 1.0);
    CHECK(scattering::cutoff_zeta(z, 0.725) == doctest::Approx(0.5).epsilon(1e-12));
    // C4: derivatives 1..4 vanish at the seams
    for (int d = 1; d <= 4; ++d) {
        CHECK(scattering::cutoff_zeta(z, 0.5, d) == 0.0);
        CHECK(std::abs(scattering::cutoff_zeta(z, 0.95, d)) < 1e-9);
        CHECK(std::abs(scattering::cutoff_zeta(z, 0.5 + 1e-3, d)) <
              std::abs(scattering::cutoff_zeta(z, 0.5 + 1e-2, d)));
    }
    // finite-difference check of the derivatives inside the band
    for (int d = 1; d <= 3; ++d) {
        const double x = 0.71, h = 1e-6;
        const double fd = (scattering::cutoff_zeta(z, x + h, d - 1) -
                           scattering::cutoff_zeta(z, x - h, d - 1)) /
                          (2 * h);
        CHECK(scattering::cutoff_zeta(z, x, d) ==
              doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("lifted source properties") {
    const double k = 5.0;
    fem::StripMesh mesh(1.5, 60, 20);
    scattering::IncidentMode ui{1, +1, k};

    SUBCASE("support is exactly the transition bands") {
        scattering::CutoffSpec z{0.5, 0.45};
        auto f = scattering::lifted_source(ui, z, k, mesh);
        for (double x : {-1.3, -1.0, -0.2, 0.0, 0.3, 1.0, 1.3})
            CHECK(std::abs(f(x, 0.4)) == 0.0);
        bool nonzero = false;
        for (double x = 0.52; x < 0.95; x += 0.05)
            if (std::abs(f(x, 0.4)) > 0.0) nonzero = true;
        CHECK(nonzero);
    }

    SUBCASE("zeta equal to one everywhere gives zero source") {
        // (Δ²-k⁴)u_i = 0, so with no transition band inside the domain the
        // analytic combination of ζ-derivatives vanishes identically
        scattering::CutoffSpec z{0.5, 0.45};
        auto f = scattering::lifted_source(ui, z, k, mesh);
        for (double x : {1.0, 1.2, 1.45})
            for (double y : {0.2, 0.7}) CHECK(std::abs(f(x, y)) == 0.0);
    }

    SUBCASE("cutoff overlapping the hole is rejected") {
        fem::StripMesh holed(1.5, 160, 40, fem::HoleRect{-0.3, 0.4, 0.3, 0.7});
        CHECK_THROWS_AS(scattering::lifted_source(ui, {0.2, 0.5}, k, holed),
                        CutoffOverlapsHole);
    }

    SUBCASE("orthogonal to decaying homogeneous solutions") {
        // one-sided band: ∫ f z = 0 for z = e^{-γ_q (x-L)} θ_q, exactly the
        // integration-by-parts mechanism of the compatibility identity
        const double L = 1.5;
        scattering::CutoffSpec z{0.5, 0.45};
        const double eta = std::sqrt(k * k - kPi * kPi);
        const Cplx ie(0.0, eta);
        const double norm = 1.0 / std::sqrt(2.0 * eta);
        auto right_band_f = [&](double x, double y) -> Cplx {
            // right transition band only
            const double mu = kPi * kPi;
            auto chi = [&](double xx, int d) { return ramp(xx, z.x0, z.w, d); };
            const Cplx X = norm * std::exp(ie * x);
            const Cplx X1 = ie * X, X2 = ie * X1, X3 = ie * X2;
            const Cplx fx = chi(x, 4) * X + 4.0 * chi(x, 3) * X1 +
                            6.0 * chi(x, 2) * X2 + 4.0 * chi(x, 1) * X3 -
                            2.0 * mu * (chi(x, 2) * X + 2.0 * chi(x, 1) * X1);
            return -fx * transverse::theta(1, y);
        };
        for (int q : {1, 2}) {
            const double gq = std::sqrt(k * k + kPi * kPi * q * q);
            const Cplx ip = quad::integrate_panels(
                [&](double x) {
                    return quad::integrate_panels(
                        [&](double y) {
                            return right_band_f(x, y) *
                                   std::exp(-gq * (x - L)) *
                                   transverse::theta(q, y);
                        },
                        0.0, 1.0, 8, 10);
                },
                z.x0, z.x0 + z.w, 32, 10);
            CHECK(std::abs(ip) < 1e-10 * (1.0 + std::abs(gq)));
        }
    }
}

TEST_CASE("outgoing extraction round trip") {
    const double k = 5.0;
    const int n = 1;
    fem::StripMesh mesh(1.5, 48, 32);

    SUBCASE("planted rightgoing unit mode") {
        const double eta = std::sqrt(k * k - kPi * kPi);
        const Cplx ie(0.0, eta);
        auto field = [&](double x, double y, int dx, int dy) -> Cplx {
            return std::pow(ie, dx) * std::exp(ie * (x - 1.5)) *
                   transverse::theta(1, y, dy);
        };
        auto u = interpolate(mesh, field);
        auto a = scattering::extract_outgoing(u, dtn::Side::Right, k, n);
        CHECK(std::abs(a[0] - 1.0) < 5e-7);
    }

    SUBCASE("planted decaying mode extracts zero amplitude") {
        const double g1 = std::sqrt(k * k + kPi * kPi);
        auto field = [&](double x, double y, int dx, int dy) -> Cplx {
            return std::pow(-g1, dx) * std::exp(-g1 * (x - 1.5)) *
                   transverse::theta(1, y, dy);
        };
        auto u = interpolate(mesh, field);
        auto a = scattering::extract_outgoing(u, dtn::Side::Right, k, n);
        CHECK(std::abs(a[0]) < 5e-7);
    }

    SUBCASE("random modal mixtures reproduce planted coefficients") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        const double k2 = 7.0;  // two propagating modes
        fem::StripMesh fine(1.5, 60, 24);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<Cplx> a_true, b_true;
            for (int p = 1; p <= 2; ++p) {
                a_true.emplace_back(d(rng), d(rng));
                b_true.emplace_back(d(rng), d(rng));
            }
            auto field = [&](double x, double y, int dx, int dy) -> Cplx {
                Cplx s = 0.0;
                for (int p = 1; p <= 2; ++p) {
                    const double mu = kPi * kPi * p * p;
                    const double eta = std::sqrt(k2 * k2 - mu);
                    const double gam = std::sqrt(k2 * k2 + mu);
                    const Cplx ie(0.0, eta);
                    s += a_true[p - 1] * std::pow(ie, dx) *
                         std::exp(ie * (x - 1.5)) * transverse::theta(p, y, dy);
                    s += b_true[p - 1] * std::pow(-gam, dx) *
                         std::exp(-gam * (x - 1.5)) *
                         transverse::theta(p, y, dy);
                }
                return s;
            };
            auto u = interpolate(fine, field);
            auto a = scattering::extract_outgoing(u, dtn::Side::Right, k2, 2);
            for (int p = 0; p < 2; ++p)
                CHECK(std::abs(a[p] - a_true[p]) < 1e-5);
        }
    }
}

TEST_CASE("empty strip transmits the incident mode identically") {
    const double k = 5.0;
    fem::StripMesh mesh(1.5, 60, 20);
    auto sm = scattering::scattering_matrix(k, mesh);
    REQUIRE(sm.n == 1);
    // S = [[0,1],[1,0]] for the unperturbed strip
    CHECK(std::abs(sm.S(0, 0)) < 5e-3);
    CHECK(std::abs(sm.S(1, 1)) < 5e-3);
    CHECK(std::abs(sm.S(0, 1) - 1.0) < 5e-3);
    CHECK(std::abs(sm.S(1, 0) - 1.0) < 5e-3);
}

TEST_CASE("hole scattering: unitary and symmetric within discretization") {
    const double k = 5.0;
    fem::StripMesh mesh(1.5, 80, 20, fem::HoleRect{-0.3, 0.4, 0.3, 0.7});
    auto sm = scattering::scattering_matrix(k, mesh);
    REQUIRE(sm.n == 1);
    CHECK(sm.unitarity_defect() < 0.1);
    CHECK(sm.symmetry_defect() < 0.1);
    // energy balance columnwise
    for (int j = 0; j < 2; ++j) {
        double col = 0.0;
        for (int i = 0; i < 2; ++i) col += std::norm(sm.S(i, j));
        CHECK(col == doctest::Approx(1.0).epsilon(0.1));
    }
    // the hole actually reflects something
    CHECK(std::abs(sm.S(0, 0)) > 1e-3);
}
