#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "plate/common.hpp"
#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

namespace plate::clamped_strip {

/// 2D field with mixed derivatives: f(x, y, dx, dy).
using Field = std::function<Complex(double, double, int, int)>;

/// Compactly supported separable source Σ_t X_t(x) Y_t(y).
struct SeparableTerm {
    std::function<Complex(double)> X;
    double x_lo, x_hi;  // support of X
    std::function<Complex(double)> Y;
};
struct SourceTerm {
    std::vector<SeparableTerm> terms;
    double x_lo() const;
    double x_hi() const;
};

struct ContourSpec {
    double beta = 0.5;          // abscissa shift (> 0)
    double T = 64.0;            // |Im λ| truncation
    int n_quad = 2048;          // trapezoid points
    double residue_radius = 0.25;
};

/// Cached clamped spectral data for one k: propagating η_p, off-axis
/// eigenvalues within |λ| ≤ 2k+10, and the smallest off-axis |Re λ|.
struct SpectrumInfo {
    std::vector<double> etas;
    std::vector<Complex> off_axis;
    double min_re_off_axis = 0.0;
};
const SpectrumInfo& spectrum_info(double k);

/// β = min(1, half the smallest off-axis |Re λ|), T = 40 + 4k, n = 2048;
/// residue radius from the eigenvalue gaps. Throws on threshold k.
ContourSpec default_contour(double k);

/// Inverse Fourier-Laplace solution on the line Re λ = -β:
/// u(x,y) = (1/2πi) ∫ e^{λx} L(λ)^{-1} f̂(λ,·) dλ, trapezoid in Im λ.
class ContourSolution {
public:
    Complex eval(double x, double y, int dx = 0, int dy = 0) const;
    const std::vector<Complex>& nodes() const { return lambda_; }

private:
    friend ContourSolution contour_solve(const SourceTerm&, double,
                                         const ContourSpec&,
                                         const transverse::HermiteGrid1D&);
    std::shared_ptr<transverse::HermiteGrid1D> grid_;
    std::vector<Complex> lambda_, weight_;
    std::vector<Eigen::VectorXcd> dofs_;
};

/// Throws EigenvalueNearContour if an eigenvalue sits within 1e-3 of the line.
ContourSolution contour_solve(const SourceTerm& f, double k,
                              const ContourSpec& spec,
                              const transverse::HermiteGrid1D& grid);

/// Residue coefficient at λ0 = sign·iη_p: the projection on the normalized
/// mode profile of (1/2πi) ∮ L(λ)^{-1} f̂(λ,·) dλ on a small circle.
/// 16-point trapezoid with a 32-point check. Throws MultiplicityTwo at
/// thresholds (guarded through k).
Complex residue_coefficient(const SourceTerm& f, int p, int sign, double k,
                            const ContourSpec& spec,
                            const transverse::HermiteGrid1D& grid);

/// Outgoing solution in detached-asymptotics form.
class DecomposedField {
public:
    std::vector<Complex> a;     // coefficients of χ⁺ w_p^+
    std::vector<Complex> b;     // coefficients of χ⁻ w_p^-
    std::vector<double> etas;
    double beta = 0.0;
    double cutoff_L = 1.0;      // χ^± transition on [L, 2L]

    Complex eval(double x, double y, int dx = 0, int dy = 0) const;
    Complex eval_remainder(double x, double y) const;
    Field field() const;

private:
    friend DecomposedField radiating_solution(const SourceTerm&, double,
                                              const ContourSpec&,
                                              const transverse::HermiteGrid1D&);
    ContourSolution v_;
    std::vector<transverse::ModeProfile> profiles_;
    double k_ = 0.0;
};

/// Solves with β > 0 and corrects the incoming content at -∞ found by the
/// residues so the result is outgoing.
DecomposedField radiating_solution(const SourceTerm& f, double k,
                                   const ContourSpec& spec,
                                   const transverse::HermiteGrid1D& grid);
DecomposedField radiating_solution(const SourceTerm& f, double k);

/// Flux-normalized propagating mode w_p^±(x,y) = e^{±iη_p x} φ_p(y) as a Field.
Field mode_field(int p, int sign, double k);

/// χ^± u with χ^± ramping on [L, 2L] (C⁴ family); Leibniz in x.
Field cutoff_field(const Field& u, int sign, double L);

/// Symplectic pairing via the Σ_H cross-section integrals
/// q = Σ_{x=±H} ±∫ ∂_xΔu v̄ - u ∂_xΔv̄ - Δu ∂_x v̄ + ∂_x u Δv̄ dy.
Complex symplectic_form(const Field& u, const Field& v, double H);

/// Biorthogonality extraction: a_p = i q(u, χ⁺w_p^+), b_p = i q(u, χ⁻w_p^-).
struct FluxCoefficients {
    std::vector<Complex> a, b;
};
FluxCoefficients flux_extract(const Field& u, double k, double H, double cutoff_L);

/// Source f = (Δ²-k⁴)(χ^{side} w_p^{sign}) computed analytically; the planted
/// outgoing solution is χ^{side} w_p^{sign} itself. `order` selects the
/// smoothstep family of the cutoff used to build the source.
SourceTerm planted_mode_source(int p, int sign, int side, double k, double L,
                               int order = 8);

}  // namespace plate::clamped_strip
