#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "plate/common.hpp"
#include "plate/dtn.hpp"

namespace plate::fem {

struct HoleRect {
    double x0, y0, x1, y1;
};

/// Rectangular mesh of Ω_L = (-L,L)×(0,1), optionally minus an axis-aligned
/// rectangular hole whose boundary lies on mesh lines.
class StripMesh {
public:
    StripMesh(double L, int nx, int ny,
              std::optional<HoleRect> hole = std::nullopt);

    double L() const { return L_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return 2.0 * L_ / nx_; }
    double hy() const { return 1.0 / ny_; }
    double x_of(int ix) const { return -L_ + ix * hx(); }
    double y_of(int iy) const { return iy * hy(); }
    int node_id(int ix, int iy) const { return ix * (ny_ + 1) + iy; }
    int n_nodes() const { return (nx_ + 1) * (ny_ + 1); }
    bool element_active(int ex, int ey) const;
    bool node_active(int ix, int iy) const;
    const std::optional<HoleRect>& hole() const { return hole_; }

private:
    double L_;
    int nx_, ny_;
    std::optional<HoleRect> hole_;
    int hole_ex0_ = 0, hole_ex1_ = 0, hole_ey0_ = 0, hole_ey1_ = 0;
};

/// Which degrees of freedom carry essential conditions.
enum class EssentialBc {
    SimplySupportedStrip,  // u = u_x = 0 on y ∈ {0,1}
    ClampedStrip,          // u = u_x = u_y = u_xy = 0 on y ∈ {0,1}
    ClampedAll             // clamped on the whole outer boundary
};

/// C¹ field on the mesh: per node (u, u_x, u_y, u_xy).
class PlateField {
public:
    PlateField() = default;
    PlateField(const StripMesh* mesh, Eigen::VectorXcd dofs)
        : mesh_(mesh), dofs_(std::move(dofs)) {}
    /// Bicubic evaluation; dx, dy ≤ 3. Returns 0 inside the hole.
    Complex eval(double x, double y, int dx = 0, int dy = 0) const;
    const Eigen::VectorXcd& dofs() const { return dofs_; }
    const StripMesh& mesh() const { return *mesh_; }

private:
    const StripMesh* mesh_ = nullptr;
    Eigen::VectorXcd dofs_;
};

struct AssembledSystem {
    const StripMesh* mesh = nullptr;
    double k = 0.0, nu = 0.0;
    EssentialBc bc = EssentialBc::SimplySupportedStrip;
    Eigen::SparseMatrix<Complex> A;   // complex symmetric: a - k⁴ m - t
    Eigen::VectorXcd b;
    std::vector<int> eq_of_dof;       // raw dof (4/node) -> equation or -1
    Eigen::VectorXcd essential;       // raw-sized, essential dof values
    int n_eq = 0;

    Eigen::VectorXcd reduce(const Eigen::VectorXcd& raw) const;
    Eigen::VectorXcd expand(const Eigen::VectorXcd& eq) const;
};

using ScalarField2D = std::function<Complex(double, double)>;

/// Volume part: element integrals of ν Δu Δv + (1-ν)(u_xx v_xx + 2 u_xy v_xy
/// + u_yy v_yy) - k⁴ u v by 4x4 Gauss, plus the load ∫ f v.
/// `essential` (optional) supplies inhomogeneous essential values (comp 0..3).
AssembledSystem assemble_plate(
    const StripMesh& mesh, double nu, double k, EssentialBc bc,
    const ScalarField2D& f = nullptr,
    const std::function<Complex(double, double, int)>& essential = nullptr,
    int rhs_gauss = 6);

/// Adds the -t(u,v) DtN coupling on Σ_{±L} (modal truncation P_max).
void assemble_dtn_coupling(AssembledSystem& sys, int p_max);

/// Sparse direct factorization shared across right-hand sides.
class PlateSolver {
public:
    explicit PlateSolver(const AssembledSystem& sys);
    /// Solves with the stored load; relative residual must be < 1e-10.
    PlateField solve() const;
    /// Solves with a replacement raw load vector l_i = ∫ f N_i.
    PlateField solve_with_load(const Eigen::VectorXcd& raw_load) const;
    PlateField solve_with_reduced(const Eigen::VectorXcd& b) const;
    /// ||Ax-b|| / ||b|| of the last solve.
    double last_residual() const { return last_residual_; }
    /// ||Ax-b|| / (||A|| ||x|| + ||b||): the gated quantity.
    double last_backward_error() const { return last_backward_error_; }

private:
    const AssembledSystem* sys_;
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu_;
    Eigen::SparseMatrix<Complex> scaled_A_;
    Eigen::VectorXd scale_;
    double anorm_ = 1.0;
    mutable double last_residual_ = 0.0;
    mutable double last_backward_error_ = 0.0;
};

/// Raw load vector ∫ f N_i dx dy over active elements.
Eigen::VectorXcd project_load(const StripMesh& mesh, const ScalarField2D& f,
                              int gauss = 6);

enum class Edge { Bottom, Top, Left, Right };

/// Bending moment and transverse force Mu = ∂²u/∂n² + ν ∂²u/∂s²,
/// Nu = -(∂³u/∂n³ + (2-ν) ∂³u/∂n∂s²) sampled along an outer edge.
std::vector<std::pair<Complex, Complex>> boundary_operators(
    const PlateField& u, double nu, Edge edge, const std::vector<double>& s);

/// Modal trace coefficients (g_p, h_p) of (u, ∂_n u) on Σ_{±L}; per-edge
/// Gauss order max(8, p+4) against θ_p.
dtn::TraceCoefficients modal_traces(const PlateField& u, dtn::Side side,
                                    int p_max);

/// H² seminorm of (u - u_ex) by element quadrature; u_ex with derivatives
/// (dx,dy) ∈ {(2,0),(1,1),(0,2)} supplied as a callable (x,y,dx,dy).
double h2_seminorm_error(
    const PlateField& u,
    const std::function<Complex(double, double, int, int)>& u_ex);

}  // namespace plate::fem
