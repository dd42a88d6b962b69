#pragma once

#include <vector>

#include "plate/common.hpp"

namespace plate::physics {

/// Plate wave speed c = √(D/ρh); ω = c k².
struct WaveSpeed {
    double c = 1.0;
    double omega(double k) const { return c * k * k; }
};

/// Group velocity of W_p^± at wavenumber k, sign ∈ {+1,-1}.
/// Simply supported: ±2cη_p. Clamped: ±2c / (4k² ∫|φ_p|²) with the
/// flux-normalized profile. Throws NotPropagating.
double group_velocity(int p, double k, Bc bc, double c, int sign = +1);

/// Phase velocity ω/(±η_p).
double phase_velocity(int p, double k, Bc bc, double c, int sign = +1);

/// Positive propagating wavenumber η_p (p-th smallest), either condition.
double eta_p(int p, double k, Bc bc);

/// d(iη_p^γ)/dγ at γ=0: -(1/(4c²k³)) ∂η_p/∂k, with ∂η_p/∂k evaluated from
/// the normalized profile (= 4k³ ∫|φ_p|² under the flux normalization).
Complex absorption_slope(int p, double k, Bc bc, double c);

/// Damped modal exponent iη_p^γ: root of the dispersion function with
/// (k^γ)⁴ = k⁴ + iγ/c², found by Newton continuation seeded at iη_p.
/// Throws ContinuationLost if the iterate leaves the trust radius.
Complex damped_exponent(int p, double k, double gamma, double c,
                        Bc bc = Bc::Clamped);

struct AbsorptionTrajectory {
    std::vector<double> gamma;
    std::vector<Complex> eta_gamma;  // iη_p^γ values
    Complex limit;                   // iη_p
};
AbsorptionTrajectory damped_trajectory(int p, double k,
                                       const std::vector<double>& gammas,
                                       double c, Bc bc = Bc::Clamped);

}  // namespace plate::physics
