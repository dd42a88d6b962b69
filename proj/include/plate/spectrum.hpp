#pragma once

#include <vector>

#include "plate/common.hpp"

namespace plate::spectrum {

enum class ModeClass { Propagating, RealEvanescent, Complex, Zero };

struct ModalExponent {
    Complex lambda;
    ModeClass cls = ModeClass::Complex;
    int geom_mult = 1;
    int alg_mult = 1;
};

struct ThresholdTable {
    Bc bc;
    std::vector<double> k;  // strictly increasing
};

/// Threshold wavenumbers: simply supported nπ; clamped roots of
/// cos(k)cosh(k) = 1 (rescaled as cos(k) = sech(k) to avoid overflow).
ThresholdTable thresholds(Bc bc, int n_max);

/// Distance from k to the nearest threshold; throws if below tol.
void guard_threshold(double k, Bc bc, double tol = 1e-9);

/// {±iη_p, ±γ_p : p ≤ p_max}, η_p = √(k²-π²p²) (upper-branch imaginary for
/// k < πp), γ_p = √(k²+π²p²). Throws ThresholdWavenumber if k ∈ Nπ.
std::vector<ModalExponent> simply_supported_exponents(double k, int p_max);

/// Purely imaginary clamped exponents ±iτk from the zeros of h_k on (0,1).
/// Sign-scan on a uniform grid, then bisection + Newton polish.
std::vector<ModalExponent> clamped_propagating(double k);

/// Positive η_p values only, ascending (clamped propagating).
std::vector<double> clamped_etas(double k);

struct SearchRegion {
    double re_min, re_max, im_min, im_max;
    double rho = 0.0;    // |λ| > rho implies bow-tie localization
    double delta = 0.2;  // slope bound of the eigenvalue-free sector
};
SearchRegion default_region(double k);

/// Zeros of the dispersion function inside the region by argument-principle
/// winding counts on subdivided boxes, Newton polish; multiplicity from the
/// winding number. Boxes through a zero are perturbed and retried (≤5).
std::vector<ModalExponent> complex_exponents(double k, Bc bc,
                                             const SearchRegion& region);

/// 1 for a simple zero of the dispersion function, 2 for λ=0 at a threshold.
/// Derivative by 5-point complex stencil; throws Inconclusive near the
/// noise floor.
int algebraic_multiplicity(Complex lambda, double k, Bc bc);

struct DegenerateReport {
    bool member = false;                      // k ∈ K within tolerance
    std::vector<std::pair<int, int>> pairs;   // matching (m, n), m-n even
    std::vector<double> lambda_part;          // associated Λ_part values
};

/// Scan of the degenerate set K = {π√(m²-n²)/√2 : m>n≥1, m-n even}.
DegenerateReport degenerate_k(double k, double tol = 1e-9);

}  // namespace plate::spectrum
