#include "plate/dtn.hpp"

#include <cmath>

#include "plate/spectrum.hpp"

namespace plate::dtn {

int propagating_count(double k) {
    return static_cast<int>(std::floor(k / kPi));
}

DtnBlock dtn_block(int p, double k, double nu) {
    if (p < 1) throw Error("dtn_block: p must be >= 1");
    if (nu < 0.0 || nu >= 1.0) throw Error("dtn_block: Poisson ratio must be in [0,1)");
    spectrum::guard_threshold(k, Bc::SimplySupported);
    DtnBlock b;
    b.p = p;
    b.mu = kPi * kPi * p * p;
    const double k2 = k * k;
    // η purely imaginary above cutoff: η = iβ with β = √(π²p² - k²)
    b.eta = (k2 > b.mu) ? Complex(std::sqrt(k2 - b.mu), 0.0)
                        : Complex(0.0, std::sqrt(b.mu - k2));
    b.gamma = std::sqrt(k2 + b.mu);
    const Complex i(0.0, 1.0);
    const Complex ge = i * b.gamma * b.eta;
    const Complex gmi = b.gamma - i * b.eta;
    b.T << ge * gmi, ge - nu * b.mu,
           ge - nu * b.mu, -gmi;
    return b;
}

std::vector<DtnBlock> dtn_blocks(double k, double nu, int p_max) {
    std::vector<DtnBlock> out;
    out.reserve(p_max);
    for (int p = 1; p <= p_max; ++p) out.push_back(dtn_block(p, k, nu));
    return out;
}

std::pair<std::vector<Complex>, std::vector<Complex>> apply_dtn(
    const TraceCoefficients& tc, double k, double nu) {
    std::vector<Complex> N(tc.g.size()), M(tc.g.size());
    for (int p = 1; p <= tc.p_max(); ++p) {
        const DtnBlock b = dtn_block(p, k, nu);
        Eigen::Vector2cd gh(tc.g[p - 1], tc.h[p - 1]);
        Eigen::Vector2cd nm = b.T * gh;
        N[p - 1] = nm(0);
        M[p - 1] = nm(1);
    }
    return {N, M};
}

namespace {
Complex form_t_side(const TraceCoefficients& tc, double k, double nu) {
    // quadratic form with real weights |g|², |h|², 2Re(g conj h): the purely
    // real evanescent blocks then contribute an exactly-zero imaginary part
    Complex s = 0.0;
    for (int p = 1; p <= tc.p_max(); ++p) {
        const DtnBlock b = dtn_block(p, k, nu);
        const Complex g = tc.g[p - 1], h = tc.h[p - 1];
        const double cross =
            2.0 * (g.real() * h.real() + g.imag() * h.imag());
        s += b.T(0, 0) * std::norm(g) + b.T(1, 1) * std::norm(h) +
             b.T(0, 1) * cross;
    }
    return s;
}
}  // namespace

Complex form_t(const TraceCoefficients& left, const TraceCoefficients& right,
               double k, double nu) {
    return form_t_side(left, k, nu) + form_t_side(right, k, nu);
}

RealPartSplit split_re_t(const TraceCoefficients& tc, double k, double nu) {
    RealPartSplit out;
    const int n = propagating_count(k);
    for (int p = 1; p <= tc.p_max(); ++p) {
        const double mu = kPi * kPi * p * p;
        const double gamma = std::sqrt(k * k + mu);
        const Complex g = tc.g[p - 1], h = tc.h[p - 1];
        const double re_gh = (g * std::conj(h)).real();
        if (p <= n) {
            const double eta = std::sqrt(k * k - mu);
            out.u_p.push_back(-gamma * eta * eta * std::norm(g) +
                              gamma * std::norm(h) + 2.0 * nu * mu * re_gh);
        } else {
            const double beta = std::sqrt(mu - k * k);
            out.v_p.push_back(gamma * beta * (gamma + beta) * std::norm(g) +
                              (gamma + beta) * std::norm(h) +
                              2.0 * (gamma * beta + nu * mu) * re_gh);
        }
    }
    return out;
}

std::pair<Complex, Complex> invert_trace(int p, double k, Complex g, Complex h) {
    const double mu = kPi * kPi * p * p;
    const Complex eta = (k * k > mu) ? Complex(std::sqrt(k * k - mu), 0.0)
                                     : Complex(0.0, std::sqrt(mu - k * k));
    const double gamma = std::sqrt(k * k + mu);
    const Complex i(0.0, 1.0);
    const Complex den = gamma + i * eta;
    const Complex a = (gamma * g + h) / den;
    const Complex b = (i * eta * g - h) / den;
    return {a, b};
}

}  // namespace plate::dtn
