#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plate/dtn.hpp"
#include "plate/transverse.hpp"

using namespace plate;
using Cplx = plate::Complex;

namespace {

dtn::TraceCoefficients random_traces(std::mt19937& rng, int p_max,
                                     dtn::Side side) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    dtn::TraceCoefficients tc;
    tc.side = side;
    for (int p = 0; p < p_max; ++p) {
        tc.g.emplace_back(d(rng), d(rng));
        tc.h.emplace_back(d(rng), d(rng));
    }
    return tc;
}

// product-form oracle: T_p from the two-matrix product preceding the
// closed-form entries.
Eigen::Matrix2cd block_product_form(int p, double k, double nu) {
    const double mu = kPi * kPi * p * p;
    const Cplx eta = (k * k > mu) ? Cplx(std::sqrt(k * k - mu), 0.0)
                                  : Cplx(0.0, std::sqrt(mu - k * k));
    const double gamma = std::sqrt(k * k + mu);
    const Cplx i(0.0, 1.0);
    Eigen::Matrix2cd A, B;
    A << i * eta * eta * eta + i * (2.0 - nu) * mu * eta,
        gamma * gamma * gamma - (2.0 - nu) * mu * gamma,
        -(eta * eta + nu * mu), gamma * gamma - nu * mu;
    B << gamma, 1.0, i * eta, -1.0;
    return A * B / (gamma + i * eta);
}

}  // namespace

TEST_CASE("block entries match the product form and are symmetric") {
    for (double k : {5.0, 7.3}) {
        for (int p : {1, 2, 5, 17}) {
            auto b = dtn::dtn_block(p, k, 0.3);
            CHECK(std::abs(b.T(0, 1) - b.T(1, 0)) == 0.0);
            auto P = block_product_form(p, k, 0.3);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(std::abs(b.T(i, j) - P(i, j)) <=
                          1e-12 * std::max(1.0, std::abs(P(i, j))));
        }
    }
    CHECK_THROWS_AS(dtn::dtn_block(1, kPi, 0.3), ThresholdWavenumber);
}

TEST_CASE("flux positivity of the first propagating block") {
    auto b = dtn::dtn_block(1, 5.0, 0.3);
    // T11 = iγη(γ - iη) has positive imaginary part γ²η for propagating p
    CHECK(b.T(0, 0).imag() > 0.0);
    CHECK(b.T(0, 0).imag() ==
          doctest::Approx(b.gamma * b.gamma * b.eta.real()).epsilon(1e-12));
}

TEST_CASE("no overflow up to p=200") {
    for (int p : {50, 200}) {
        auto b = dtn::dtn_block(p, 5.0, 0.3);
        CHECK(std::isfinite(b.T(0, 0).real()));
        CHECK(std::isfinite(b.T(0, 0).imag()));
        CHECK(std::abs(b.T(0, 0)) > 0.0);
    }
}

TEST_CASE("apply_dtn") {
    const double k = 5.0, nu = 0.3;
    std::mt19937 rng(3);

    SUBCASE("linearity at zero") {
        dtn::TraceCoefficients tc;
        tc.g.assign(8, 0.0);
        tc.h.assign(8, 0.0);
        auto [N, M] = dtn::apply_dtn(tc, k, nu);
        for (auto v : N) CHECK(std::abs(v) == 0.0);
        for (auto v : M) CHECK(std::abs(v) == 0.0);
    }

    SUBCASE("rightgoing unit mode reproduces the boundary operators") {
        // field e^{iη_p (x-L)} θ_p at x = L: traces (g,h) = (1, iη_p);
        // Mu = u_xx + ν u_yy, Nu = -(u_xxx + (2-ν) u_xyy) evaluated directly
        for (int p : {1, 2, 4}) {
            const double mu = kPi * kPi * p * p;
            const Cplx eta = (k * k > mu) ? Cplx(std::sqrt(k * k - mu), 0.0)
                                          : Cplx(0.0, std::sqrt(mu - k * k));
            const Cplx i(0.0, 1.0);
            dtn::TraceCoefficients tc;
            tc.g.assign(p, 0.0);
            tc.h.assign(p, 0.0);
            tc.g[p - 1] = 1.0;
            tc.h[p - 1] = i * eta;
            auto [N, M] = dtn::apply_dtn(tc, k, nu);
            const Cplx Mu = (i * eta) * (i * eta) - nu * mu;
            const Cplx Nu = -((i * eta) * (i * eta) * (i * eta) -
                              (2.0 - nu) * mu * (i * eta));
            CHECK(std::abs(M[p - 1] - Mu) < 1e-11 * std::max(1.0, std::abs(Mu)));
            CHECK(std::abs(N[p - 1] - Nu) < 1e-11 * std::max(1.0, std::abs(Nu)));
        }
    }
}

TEST_CASE("trapped-mode identity for Im t") {
    const double k = 5.0, nu = 0.3;
    const int n = dtn::propagating_count(k);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto left = random_traces(rng, 20, dtn::Side::Left);
        auto right = random_traces(rng, 20, dtn::Side::Right);
        const Cplx t = dtn::form_t(left, right, k, nu);
        double expected = 0.0;
        for (const auto* tc : {&left, &right})
            for (int p = 1; p <= n; ++p) {
                const double eta = std::sqrt(k * k - kPi * kPi * p * p);
                const double gamma = std::sqrt(k * k + kPi * kPi * p * p);
                expected +=
                    eta * std::norm(gamma * tc->g[p - 1] + tc->h[p - 1]);
            }
        CHECK(t.imag() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("evanescent-only content has exactly real t") {
    const double k = 5.0, nu = 0.3;
    std::mt19937 rng(23);
    auto left = random_traces(rng, 20, dtn::Side::Left);
    auto right = random_traces(rng, 20, dtn::Side::Right);
    const int n = dtn::propagating_count(k);
    for (int p = 0; p < n; ++p) {
        left.g[p] = left.h[p] = 0.0;
        right.g[p] = right.h[p] = 0.0;
    }
    CHECK(std::abs(dtn::form_t(left, right, k, nu).imag()) < 1e-14);
}

TEST_CASE("evanescent terms of -Re t obey the k^3 lower bound") {
    std::mt19937 rng(29);
    for (double k : {5.0, 7.0}) {
        auto tc = random_traces(rng, 200, dtn::Side::Right);
        auto split = dtn::split_re_t(tc, k, 0.3);
        const int n = dtn::propagating_count(k);
        // v_p ≥ -k³ |g_p|²
        for (std::size_t j = 0; j < split.v_p.size(); ++j) {
            const int p = n + 1 + static_cast<int>(j);
            CHECK(split.v_p[j] >=
                  -k * k * k * std::norm(tc.g[p - 1]) - 1e-12);
        }
        // decomposition reproduces -Re t exactly
        dtn::TraceCoefficients zero;
        zero.g.assign(200, 0.0);
        zero.h.assign(200, 0.0);
        double sum = 0.0;
        for (double u : split.u_p) sum += u;
        for (double v : split.v_p) sum += v;
        const Cplx t = dtn::form_t(tc, zero, k, 0.3);
        CHECK(-t.real() == doctest::Approx(sum).epsilon(1e-11));
    }
}

TEST_CASE("explicit lower bound -Re t >= -c1^2 ||g||^2") {
    const double k = 5.0, nu = 0.3;
    const int n = dtn::propagating_count(k);
    double c1sq = k * k * k;
    for (int p = 1; p <= n; ++p) {
        const double mu = kPi * kPi * p * p;
        const double eta2 = k * k - mu;
        const double gamma = std::sqrt(k * k + mu);
        c1sq = std::max(c1sq, gamma * eta2 + nu * nu * mu * mu / gamma);
    }
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        auto left = random_traces(rng, 40, dtn::Side::Left);
        auto right = random_traces(rng, 40, dtn::Side::Right);
        const Cplx t = dtn::form_t(left, right, k, nu);
        double gnorm = 0.0;
        for (const auto* tc : {&left, &right})
            for (const Cplx& g : tc->g) gnorm += std::norm(g);
        CHECK(-t.real() >= -c1sq * gnorm - 1e-10);
    }
}

TEST_CASE("outgoing coefficients reproduced through the trace inversion") {
    const double k = 5.0;
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int p : {1, 2, 3, 8}) {
        const double mu = kPi * kPi * p * p;
        const Cplx eta = (k * k > mu) ? Cplx(std::sqrt(k * k - mu), 0.0)
                                      : Cplx(0.0, std::sqrt(mu - k * k));
        const double gamma = std::sqrt(k * k + mu);
        const Cplx i(0.0, 1.0);
        for (int trial = 0; trial < 25; ++trial) {
            const Cplx a(d(rng), d(rng)), b(d(rng), d(rng));
            const Cplx g = a + b;
            const Cplx h = i * eta * a - gamma * b;
            auto [ar, br] = dtn::invert_trace(p, k, g, h);
            CHECK(std::abs(ar - a) < 1e-12);
            CHECK(std::abs(br - b) < 1e-12);
        }
    }
}
