#include "plate/physics.hpp"

#include <cmath>

#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

namespace plate::physics {

double eta_p(int p, double k, Bc bc) {
    if (p < 1) throw Error("eta_p: p must be >= 1");
    if (bc == Bc::SimplySupported) {
        const double mu = kPi * kPi * p * p;
        if (k * k <= mu) throw NotPropagating("mode p=" + std::to_string(p) +
                                              " not propagating at k=" + std::to_string(k));
        return std::sqrt(k * k - mu);
    }
    auto etas = spectrum::clamped_etas(k);
    if (p > static_cast<int>(etas.size()))
        throw NotPropagating("mode p=" + std::to_string(p) +
                             " not propagating at k=" + std::to_string(k));
    return etas[p - 1];
}

namespace {
// ∫ |φ_p|² dy with the flux normalization applied.
double normalized_l2(int p, double k, Bc bc) {
    const double eta = eta_p(p, k, bc);
    transverse::ModeProfile phi(Complex(0.0, eta), k, bc);
    phi.normalize_flux();
    return phi.l2_norm_sq();
}
}  // namespace

double group_velocity(int p, double k, Bc bc, double c, int sign) {
    const double eta = eta_p(p, k, bc);
    if (bc == Bc::SimplySupported) return sign * 2.0 * c * eta;
    return sign * 2.0 * c / (4.0 * k * k * normalized_l2(p, k, bc));
}

double phase_velocity(int p, double k, Bc bc, double c, int sign) {
    const double eta = eta_p(p, k, bc);
    return c * k * k / (sign * eta);
}

Complex absorption_slope(int p, double k, Bc bc, double c) {
    // ∂η/∂k = 4k³ ∫|φ_p|² under the flux normalization, so the slope
    // collapses to -∫|φ_p|²/c².
    return Complex(-normalized_l2(p, k, bc) / (c * c), 0.0);
}

namespace {

Complex disp_k4(Complex lambda, Complex k2, Bc bc) {
    if (bc == Bc::Clamped) return transverse::det_clamped_entire_k2(lambda, k2);
    const Complex tP = branch_sqrt(lambda * lambda + k2);
    const Complex tM = branch_sqrt(lambda * lambda - k2);
    return sinc(tP) * sinc(tM);
}

Complex newton_damped(Complex seed, Complex k2, Bc bc, Complex center,
                      double trust) {
    Complex z = seed;
    for (int it = 0; it < 100; ++it) {
        const double h = std::max(1e-8, 1e-9 * std::abs(z));
        const Complex f = disp_k4(z, k2, bc);
        const Complex d = (disp_k4(z + h, k2, bc) - disp_k4(z - h, k2, bc)) / (2.0 * h);
        if (std::abs(d) < 1e-300) break;
        const Complex step = f / d;
        z -= step;
        if (std::abs(z - center) > trust)
            throw ContinuationLost("damped_exponent: iterate left trust radius");
        if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace

Complex damped_exponent(int p, double k, double gamma, double c, Bc bc) {
    const double k4 = k * k * k * k;
    if (gamma < 0.0 || gamma > 0.1 * c * c * k4)
        throw Error("damped_exponent: gamma outside [0, 0.1 c^2 k^4]");
    const double eta = eta_p(p, k, bc);
    const Complex seed0(0.0, eta);
    if (gamma == 0.0) return seed0;

    // trust radius: half the gap from iη_p to the other propagating exponents
    // (and to λ=0 where the branches merge at thresholds)
    double gap = eta;
    std::vector<double> etas;
    if (bc == Bc::Clamped) {
        etas = spectrum::clamped_etas(k);
    } else {
        for (int q = 1; q * q * kPi * kPi < k * k; ++q)
            etas.push_back(std::sqrt(k * k - kPi * kPi * q * q));
    }
    for (double e : etas)
        if (std::abs(e - eta) > 1e-12) gap = std::min(gap, std::abs(e - eta));
    const double trust = 0.5 * gap;

    Complex z = seed0;
    // geometric continuation, factor 10 up to the requested dissipation
    for (double g = gamma * 1e-3; g < gamma * 0.999; g *= 10.0) {
        const Complex k2 = std::sqrt(Complex(k4, g / (c * c)));
        z = newton_damped(z, k2, bc, seed0, trust);
    }
    const Complex k2 = std::sqrt(Complex(k4, gamma / (c * c)));
    return newton_damped(z, k2, bc, seed0, trust);
}

AbsorptionTrajectory damped_trajectory(int p, double k,
                                       const std::vector<double>& gammas,
                                       double c, Bc bc) {
    AbsorptionTrajectory t;
    t.limit = Complex(0.0, eta_p(p, k, bc));
    for (double g : gammas) {
        t.gamma.push_back(g);
        t.eta_gamma.push_back(damped_exponent(p, k, g, c, bc));
    }
    return t;
}

}  // namespace plate::physics
