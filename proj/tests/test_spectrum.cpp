#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

using namespace plate;
using Cplx = plate::Complex;

TEST_CASE("clamped thresholds against the tabulated roots of cos k cosh k = 1") {
    auto t = spectrum::thresholds(Bc::Clamped, 5);
    const double expected[5] = {4.730040744862704, 7.853204624095838,
                                10.995607838001671, 14.137165491257464,
                                17.278759657399481};
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(t.k[i] - expected[i]) < 1e-12);
    // residual of the defining equation
    for (double kn : t.k)
        CHECK(std::abs(std::cos(kn) - 1.0 / std::cosh(kn)) < 1e-13);
}

TEST_CASE("threshold asymptotics and lower bound") {
    auto t = spectrum::thresholds(Bc::Clamped, 20);
    CHECK(std::abs(t.k[4] - (kPi / 2.0 + 5.0 * kPi)) <= 1e-7);
    for (int n = 1; n <= 20; ++n) CHECK(t.k[n - 1] >= n * kPi);
    for (int n = 1; n < 20; ++n) CHECK(t.k[n] > t.k[n - 1]);
    // |k_n - (π/2 + nπ)| decreasing for n ≥ 2, until the gap reaches the
    // floating-point noise floor
    for (int n = 2; n < 20; ++n) {
        const double dn = std::abs(t.k[n - 1] - (kPi / 2.0 + n * kPi));
        const double dn1 = std::abs(t.k[n] - (kPi / 2.0 + (n + 1) * kPi));
        if (dn < 1e-12) break;
        CHECK(dn1 < dn);
    }
}

TEST_CASE("thresholds survive the cosh overflow range") {
    auto t = spectrum::thresholds(Bc::Clamped, 200);
    CHECK(t.k.size() == 200);
    CHECK(std::abs(t.k[199] - (kPi / 2.0 + 200.0 * kPi)) < 1e-9);
}

TEST_CASE("simply supported exponents") {
    const double k = 5.0;
    auto modes = spectrum::simply_supported_exponents(k, 3);
    // oracle: direct evaluation of η_p, γ_p
    const double eta1 = std::sqrt(k * k - kPi * kPi);
    const double gamma1 = std::sqrt(k * k + kPi * kPi);
    bool has_eta = false, has_gamma = false;
    for (const auto& m : modes) {
        if (std::abs(m.lambda - Cplx(0.0, eta1)) < 1e-12) has_eta = true;
        if (std::abs(m.lambda - Cplx(gamma1, 0.0)) < 1e-12) has_gamma = true;
    }
    CHECK(has_eta);
    CHECK(has_gamma);
    CHECK_THROWS_AS(spectrum::simply_supported_exponents(2.0 * kPi, 3),
                    ThresholdWavenumber);
}

TEST_CASE("mode counting laws") {
    // simply supported: 2⌊k/π⌋ propagating exponents
    for (double k : {3.0, 5.0, 7.0, 10.0}) {
        auto modes = spectrum::simply_supported_exponents(k, 40);
        int prop = 0;
        for (const auto& m : modes)
            if (m.cls == spectrum::ModeClass::Propagating) ++prop;
        CHECK(prop == 2 * static_cast<int>(std::floor(k / kPi)));
    }
    // clamped: k=4 below k_1 gives none, k=6 in (k_1,k_2) gives 2
    CHECK(spectrum::clamped_propagating(4.0).empty());
    CHECK(spectrum::clamped_propagating(6.0).size() == 2);
}

TEST_CASE("clamped propagating roots kill the dispersion determinant") {
    for (double k : {6.0, 9.0, 12.0}) {
        auto modes = spectrum::clamped_propagating(k);
        CHECK(!modes.empty());
        // |det| can only be resolved down to the cosh(√2 k) scale in doubles
        const double tol = 1e-8 + 1e-13 * std::cosh(std::sqrt(2.0) * k);
        for (const auto& m : modes) {
            CHECK(std::abs(m.lambda) < k);  // Λ ∩ [ik, i∞) is empty
            CHECK(std::abs(transverse::det_dispersion(m.lambda, k, Bc::Clamped)) <
                  tol);
        }
    }
}

TEST_CASE("argument principle finds the simply supported real exponents") {
    const double k = 5.0;
    spectrum::SearchRegion region{0.05, 10.0, -1.0, 1.0, 0.0, 0.2};
    auto found = spectrum::complex_exponents(k, Bc::SimplySupported, region);
    // oracle: exponents are the square roots of pi^2 p^2 -+ k^2; inside
    // [0.05,10]x[-1,1] that is gamma_1, gamma_2 plus the real evanescent
    // pair members sqrt(4pi^2-k^2) and sqrt(9pi^2-k^2)
    const double r2 = std::sqrt(4.0 * kPi * kPi - k * k);
    const double r3 = std::sqrt(9.0 * kPi * kPi - k * k);
    const double g1 = std::sqrt(k * k + kPi * kPi);
    const double g2 = std::sqrt(k * k + 4.0 * kPi * kPi);
    REQUIRE(found.size() == 4);
    CHECK(std::abs(found[0].lambda - Cplx(r2, 0.0)) < 1e-9);
    CHECK(std::abs(found[1].lambda - Cplx(g1, 0.0)) < 1e-9);
    CHECK(std::abs(found[2].lambda - Cplx(r3, 0.0)) < 1e-9);
    CHECK(std::abs(found[3].lambda - Cplx(g2, 0.0)) < 1e-9);
    for (const auto& e : found) CHECK(e.alg_mult == 1);
}

TEST_CASE("clamped spectrum symmetric under negation") {
    const double k = 6.0;
    const double rho = 12.0;
    spectrum::SearchRegion region{-rho - 0.013, rho + 0.007, -rho - 0.011,
                                  rho + 0.017, rho, 0.2};
    auto found = spectrum::complex_exponents(k, Bc::Clamped, region);
    CHECK(!found.empty());
    for (const auto& e : found) {
        bool has_neg = false;
        for (const auto& f : found)
            if (std::abs(f.lambda + e.lambda) < 1e-6) has_neg = true;
        CHECK(has_neg);
    }
    // the propagating pair appears in the scan
    auto etas = spectrum::clamped_etas(k);
    for (double eta : etas) {
        bool present = false;
        for (const auto& f : found)
            if (std::abs(f.lambda - Cplx(0.0, eta)) < 1e-7) present = true;
        CHECK(present);
    }
}

TEST_CASE("algebraic multiplicity") {
    // clamped k=6, λ=iη_1 simple
    auto etas = spectrum::clamped_etas(6.0);
    CHECK(spectrum::algebraic_multiplicity(Cplx(0.0, etas[0]), 6.0,
                                           Bc::Clamped) == 1);
    // clamped threshold: λ=0 has multiplicity two
    const double k1 = 4.730040744862704;
    CHECK(spectrum::algebraic_multiplicity(Cplx(0.0, 0.0), k1, Bc::Clamped) == 2);
    // simply supported k=5, λ=γ_1 simple
    const double g1 = std::sqrt(25.0 + kPi * kPi);
    CHECK(spectrum::algebraic_multiplicity(Cplx(g1, 0.0), 5.0,
                                           Bc::SimplySupported) == 1);
}

TEST_CASE("degenerate wavenumber set") {
    auto rep = spectrum::degenerate_k(2.0 * kPi);
    CHECK(rep.member);
    REQUIRE(!rep.pairs.empty());
    CHECK(rep.pairs[0].first == 3);
    CHECK(rep.pairs[0].second == 1);
    CHECK(std::abs(rep.lambda_part[0] - kPi * std::sqrt(5.0)) < 1e-12);

    CHECK(!spectrum::degenerate_k(5.0).member);
    // strictly off the lattice
    const double off = kPi * std::sqrt(8.0) / std::sqrt(2.0) - 1e-3;
    CHECK(!spectrum::degenerate_k(off).member);
}

TEST_CASE("guard rejects thresholds") {
    CHECK_THROWS_AS(spectrum::guard_threshold(kPi, Bc::SimplySupported),
                    ThresholdWavenumber);
    CHECK_THROWS_AS(spectrum::guard_threshold(4.730040744862704, Bc::Clamped),
                    ThresholdWavenumber);
    CHECK_NOTHROW(spectrum::guard_threshold(5.0, Bc::SimplySupported));
}
