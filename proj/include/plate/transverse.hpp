#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "plate/common.hpp"

namespace plate::transverse {

// Relative guard band around the removable degeneracy λ^4 = k^4 where the
// a-basis is traded for the b-basis.
inline constexpr double kSingBand = 1e-6;

/// Transverse eigenfunctions of -d_yy on (0,1) with Dirichlet ends:
/// θ_p(y) = √2 sin(πpy). Derivatives up to order 3 via `deriv`.
double theta(int p, double y, int deriv = 0);

/// Values and derivatives (orders 0..3) of a pair of basis functions at y.
struct BasisPair {
    Complex f1[4];
    Complex f2[4];
};

/// Solutions a_1, a_2 of the symbol ODE with a_i(0) = a_i'(0) = 0, valid for
/// λ^4 ≠ k^4; removable singularities handled through sin(z)/z evaluation.
BasisPair basis_clamped_a(Complex lambda, double k, double y);

/// Degenerate-case basis b_1(y) = sin(√2 λ y)/(√2 λ) - y, b_2 = cos(√2 λ y) - 1,
/// for λ^4 = k^4 (within the guard band). Rejects λ = 0.
BasisPair basis_clamped_b(Complex lambda, double k, double y);

/// Boundary 2x2 matrix whose kernel gives the mode profile coefficients:
/// rows are (values at 1, derivatives at 1) of the active basis pair.
Eigen::Matrix2cd boundary_matrix(Complex lambda, double k, Bc bc);

/// Dispersion function whose zeros are exactly the modal exponents.
/// Clamped: det A(λ) (det B(λ) inside the λ^4=k^4 guard band).
/// Simply supported: sinc-normalized product  sin(√(λ²+k²))/√(λ²+k²) ·
/// sin(√(λ²-k²))/√(λ²-k²), zeros at λ² = π²p² ∓ k² only.
Complex det_dispersion(Complex lambda, double k, Bc bc);

/// Entire clamped determinant 2λ² sinc(√(λ²+k²)) sinc(√(λ²-k²))
/// + 2 cos(√(λ²+k²)) cos(√(λ²-k²)) - 2; analytic in λ, no basis switch.
/// On λ = iτk this coincides with the real dispersion function h_k(τ).
Complex det_clamped_entire(Complex lambda, double k);

/// Same determinant with k² passed explicitly (complex-valued k² is allowed;
/// used by the damped-symbol continuation).
Complex det_clamped_entire_k2(Complex lambda, Complex k2);

/// h_k(τ): clamped dispersion function on λ = iτk, τ ∈ [0,1). Real-valued.
double h_clamped(double k, double tau);

struct KernelVector {
    Complex c1 = 0.0, c2 = 0.0;
    double residual = 0.0;      // smallest singular value
    bool degenerate = false;    // second singular value below tolerance too
    int dimension = 1;
};

/// Right singular vector of the boundary matrix for the smallest singular
/// value, unit norm, first nonzero entry made real positive.
/// Throws NotAnEigenvalue when the smallest singular value is too large.
KernelVector kernel_vector(Complex lambda, double k, Bc bc);

// ---------------------------------------------------------------------------
// Mode profile φ(y), evaluable with derivatives up to order 3.
// ---------------------------------------------------------------------------
class ModeProfile {
public:
    /// Profile for an eigenvalue λ: kernel combination of the active basis.
    ModeProfile(Complex lambda, double k, Bc bc);

    Complex eval(double y, int deriv = 0) const;
    Complex lambda() const { return lambda_; }
    Complex coeff1() const { return c1_; }
    Complex coeff2() const { return c2_; }
    bool degenerate() const { return degenerate_; }

    /// Rescale so that 4η ∫ |φ'|² + η²|φ|² dy = 1  (λ = iη propagating).
    /// Returns the applied positive factor. Requires λ ∈ iR \ {0}.
    double normalize_flux();

    /// ∫ |φ|² dy by Gauss quadrature.
    double l2_norm_sq() const;
    /// ∫ |φ'|² + η² |φ|² dy for λ = iη.
    double flux_energy() const;

private:
    Complex lambda_;
    double k_;
    Bc bc_;
    bool use_b_ = false;
    bool ss_theta_ = false;   // simply supported: φ = θ_p exactly
    int ss_p_ = 0;
    Complex c1_ = 1.0, c2_ = 0.0;
    double scale_ = 1.0;
    bool degenerate_ = false;
};

// ---------------------------------------------------------------------------
// C¹ Hermite-cubic discretization of the 1D symbol problem on I = (0,1):
//   ∫ (λ²φ + φ'')(λ²ψ + ψ'') - k⁴ φψ dy = <rhs, ψ>.
// ---------------------------------------------------------------------------
struct HermiteGrid1D {
    explicit HermiteGrid1D(int n_elems);
    std::vector<double> nodes;   // strictly increasing, endpoints 0 and 1
    int n_elems() const { return static_cast<int>(nodes.size()) - 1; }
};

class HermiteSolution {
public:
    HermiteSolution() = default;
    HermiteSolution(const HermiteGrid1D* grid, Eigen::VectorXcd dofs)
        : grid_(grid), dofs_(std::move(dofs)) {}
    /// Evaluate the solution (deriv ≤ 3; third derivative is elementwise).
    Complex eval(double y, int deriv = 0) const;
    const Eigen::VectorXcd& dofs() const { return dofs_; }

private:
    const HermiteGrid1D* grid_ = nullptr;
    Eigen::VectorXcd dofs_;    // (value, derivative) per node
};

/// Precomputed Galerkin operator for one (k, bc, grid); λ enters per solve.
class SymbolOperator {
public:
    SymbolOperator(double k, Bc bc, const HermiteGrid1D& grid);

    /// Load vector l_i = ∫ rhs(y) N_i(y) dy over the constrained dofs.
    Eigen::VectorXcd project_rhs(const std::function<Complex(double)>& rhs) const;

    /// Solve for one λ with a projected load. Throws NearSingularSymbol if
    /// the factorization reports reciprocal condition below 1e-14.
    HermiteSolution solve(Complex lambda, const Eigen::VectorXcd& load) const;
    HermiteSolution solve(Complex lambda, const std::function<Complex(double)>& rhs) const;

    /// Quadratic form value <L(λ)φ, conj(φ)> of a solution vector.
    Complex form_value(Complex lambda, const HermiteSolution& sol) const;

    /// log|det| and unit phase of the reduced system determinant.
    std::pair<double, Complex> log_det(Complex lambda) const;

    const HermiteGrid1D& grid() const { return grid_; }
    int n_dofs() const { return n_reduced_; }

    /// Symbol solve with complex k⁴ (damped problems); bypasses the k of the
    /// constructor for the mass shift only.
    HermiteSolution solve_k4(Complex lambda, Complex k4, const Eigen::VectorXcd& load) const;

private:
    double k_;
    Bc bc_;
    HermiteGrid1D grid_;
    int n_reduced_ = 0;
    std::vector<int> keep_;               // raw dof -> kept (constrained out: -1)
    Eigen::MatrixXd mass_, cross_, bend_; // M, S = ∫(φψ''+φ''ψ), D = ∫φ''ψ''
    friend class ClampedHalfStrip;
};

}  // namespace plate::transverse
