#include "plate/transverse.hpp"

#include <cmath>

#include "plate/quadrature.hpp"

namespace plate::transverse {

double theta(int p, double y, int deriv) {
    if (p < 1) throw Error("theta: mode index p must be >= 1");
    const double a = kPi * p;
    const double arg = a * y;
    const double amp = std::sqrt(2.0) * std::pow(a, deriv);
    switch (deriv & 3) {
        case 0: return amp * std::sin(arg);
        case 1: return amp * std::cos(arg);
        case 2: return -amp * std::sin(arg);
        default: return -amp * std::cos(arg);
    }
}

BasisPair basis_clamped_a(Complex lambda, double k, double y) {
    const Complex P = lambda * lambda + k * k;
    const Complex M = lambda * lambda - k * k;
    const Complex tP = branch_sqrt(P), tM = branch_sqrt(M);
    const Complex sP = sinc(tP * y), sM = sinc(tM * y);
    const Complex cP = std::cos(tP * y), cM = std::cos(tM * y);
    BasisPair b;
    b.f1[0] = y * (sP - sM);
    b.f1[1] = cP - cM;
    b.f1[2] = y * (M * sM - P * sP);
    b.f1[3] = M * cM - P * cP;
    b.f2[0] = cP - cM;
    b.f2[1] = y * (M * sM - P * sP);
    b.f2[2] = M * cM - P * cP;
    b.f2[3] = y * (P * P * sP - M * M * sM);
    return b;
}

BasisPair basis_clamped_b(Complex lambda, double k, double y) {
    (void)k;
    if (std::abs(lambda) < 1e-14)
        throw Error("basis_clamped_b: degenerate at lambda = 0");
    const Complex z = std::sqrt(2.0) * lambda;
    const Complex s = sinc(z * y), c = std::cos(z * y);
    const Complex z2 = z * z;
    BasisPair b;
    b.f1[0] = y * (s - 1.0);
    b.f1[1] = c - 1.0;
    b.f1[2] = -z2 * y * s;
    b.f1[3] = -z2 * c;
    b.f2[0] = c - 1.0;
    b.f2[1] = -z2 * y * s;
    b.f2[2] = -z2 * c;
    b.f2[3] = z2 * z2 * y * s;
    return b;
}

namespace {

bool in_sing_band(Complex lambda, double k) {
    const Complex l2 = lambda * lambda;
    const double k4 = k * k * k * k;
    return std::abs(l2 * l2 - k4) <= kSingBand * k4;
}

// Simply supported basis with φ(0) = φ''(0) = 0: s_i(y) = sin(t_i y)/t_i.
Eigen::Matrix2cd boundary_matrix_ss(Complex lambda, double k) {
    const Complex P = lambda * lambda + k * k;
    const Complex M = lambda * lambda - k * k;
    const Complex tP = branch_sqrt(P), tM = branch_sqrt(M);
    Eigen::Matrix2cd A;
    A << sinc(tP), sinc(tM),
        -P * sinc(tP), -M * sinc(tM);
    return A;
}

}  // namespace

Eigen::Matrix2cd boundary_matrix(Complex lambda, double k, Bc bc) {
    if (bc == Bc::SimplySupported) return boundary_matrix_ss(lambda, k);
    Eigen::Matrix2cd A;
    if (in_sing_band(lambda, k)) {
        BasisPair b = basis_clamped_b(lambda, k, 1.0);
        A << b.f1[0], b.f2[0], b.f1[1], b.f2[1];
    } else {
        BasisPair a = basis_clamped_a(lambda, k, 1.0);
        A << a.f1[0], a.f2[0], a.f1[1], a.f2[1];
    }
    return A;
}

Complex det_clamped_entire_k2(Complex lambda, Complex k2) {
    const Complex P = lambda * lambda + k2;
    const Complex M = lambda * lambda - k2;
    const Complex tP = branch_sqrt(P), tM = branch_sqrt(M);
    return 2.0 * lambda * lambda * sinc(tP) * sinc(tM) +
           2.0 * std::cos(tP) * std::cos(tM) - 2.0;
}

Complex det_clamped_entire(Complex lambda, double k) {
    return det_clamped_entire_k2(lambda, Complex(k * k, 0.0));
}

Complex det_dispersion(Complex lambda, double k, Bc bc) {
    if (bc == Bc::SimplySupported) {
        const Complex tP = branch_sqrt(lambda * lambda + k * k);
        const Complex tM = branch_sqrt(lambda * lambda - k * k);
        return sinc(tP) * sinc(tM);
    }
    if (in_sing_band(lambda, k)) {
        // det B(λ) = √2λ sin(√2λ) - (2 - 2cos(√2λ))
        const Complex z = std::sqrt(2.0) * lambda;
        return z * std::sin(z) - 2.0 + 2.0 * std::cos(z);
    }
    return det_clamped_entire(lambda, k);
}

double h_clamped(double k, double tau) {
    // Real form of det A(iτk); finite limit at τ = 1.
    const double A = k * std::sqrt(std::max(0.0, 1.0 - tau * tau));
    const double B = k * std::sqrt(1.0 + tau * tau);
    const double sincA = (A < 1e-8) ? 1.0 : std::sin(A) / A;
    return -2.0 * tau * tau * k * k * sincA * (std::sinh(B) / B) +
           2.0 * std::cos(A) * std::cosh(B) - 2.0;
}

KernelVector kernel_vector(Complex lambda, double k, Bc bc) {
    const Eigen::Matrix2cd A = boundary_matrix(lambda, k, bc);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(A, Eigen::ComputeFullV);
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    const double scale = std::max(s0, 1.0);
    if (s1 > 1e-8 * scale)
        throw NotAnEigenvalue("kernel_vector: smallest singular value " +
                              std::to_string(s1) + " above tolerance");
    KernelVector kv;
    kv.residual = s1;
    Eigen::Vector2cd v = svd.matrixV().col(1);
    if (s0 <= 1e-8 * scale) {
        kv.degenerate = true;
        kv.dimension = 2;
    }
    // tie-break: first nonzero entry real positive
    Complex pivot = (std::abs(v(0)) > 1e-12) ? v(0) : v(1);
    v *= std::abs(pivot) / pivot;
    kv.c1 = v(0);
    kv.c2 = v(1);
    return kv;
}

// ---------------------------------------------------------------------------
// ModeProfile
// ---------------------------------------------------------------------------

ModeProfile::ModeProfile(Complex lambda, double k, Bc bc)
    : lambda_(lambda), k_(k), bc_(bc) {
    if (bc == Bc::SimplySupported) {
        // λ² = π²p² - k² or π²p² + k²: profile is exactly θ_p.
        const Complex l2 = lambda * lambda;
        for (int p = 1; p <= 4096; ++p) {
            const double mu = kPi * kPi * p * p;
            if (std::abs(l2 - (mu - k * k)) < 1e-6 * (mu + k * k) ||
                std::abs(l2 - (mu + k * k)) < 1e-6 * (mu + k * k)) {
                ss_theta_ = true;
                ss_p_ = p;
                break;
            }
        }
        if (!ss_theta_)
            throw NotAnEigenvalue("ModeProfile: simply supported exponent does "
                                  "not match any ±iη_p, ±γ_p");
        return;
    }
    use_b_ = in_sing_band(lambda, k);
    KernelVector kv = kernel_vector(lambda, k, bc);
    c1_ = kv.c1;
    c2_ = kv.c2;
    degenerate_ = kv.degenerate;
}

Complex ModeProfile::eval(double y, int deriv) const {
    if (ss_theta_) return scale_ * theta(ss_p_, y, deriv);
    BasisPair b = use_b_ ? basis_clamped_b(lambda_, k_, y)
                         : basis_clamped_a(lambda_, k_, y);
    return scale_ * (c1_ * b.f1[deriv] + c2_ * b.f2[deriv]);
}

double ModeProfile::l2_norm_sq() const {
    return quad::integrate_panels(
        [&](double y) { return std::norm(eval(y, 0)); }, 0.0, 1.0, 32, 8);
}

double ModeProfile::flux_energy() const {
    const double eta = lambda_.imag();
    return quad::integrate_panels(
        [&](double y) {
            return std::norm(eval(y, 1)) + eta * eta * std::norm(eval(y, 0));
        },
        0.0, 1.0, 32, 8);
}

double ModeProfile::normalize_flux() {
    if (std::abs(lambda_.real()) > 1e-9 * std::abs(lambda_) ||
        std::abs(lambda_) < 1e-12)
        throw NotPropagating("normalize_flux: exponent is not in iR\\{0}");
    const double eta = std::abs(lambda_.imag());
    const double E = flux_energy();
    const double factor = 1.0 / std::sqrt(4.0 * eta * E);
    scale_ *= factor;
    return factor;
}

// ---------------------------------------------------------------------------
// Hermite cubics on (0,1)
// ---------------------------------------------------------------------------

HermiteGrid1D::HermiteGrid1D(int n_elems) {
    if (n_elems < 2) throw Error("HermiteGrid1D: need at least 2 elements");
    nodes.resize(n_elems + 1);
    for (int i = 0; i <= n_elems; ++i)
        nodes[i] = static_cast<double>(i) / n_elems;
}

namespace {

// Cubic Hermite shape functions on an element of length h, local t ∈ [0,1].
// Order: value-left, slope-left, value-right, slope-right.
void hermite_shapes(double t, double h, int deriv, double out[4]) {
    switch (deriv) {
        case 0:
            out[0] = 1 - 3 * t * t + 2 * t * t * t;
            out[1] = h * (t - 2 * t * t + t * t * t);
            out[2] = 3 * t * t - 2 * t * t * t;
            out[3] = h * (t * t * t - t * t);
            break;
        case 1:
            out[0] = (-6 * t + 6 * t * t) / h;
            out[1] = 1 - 4 * t + 3 * t * t;
            out[2] = (6 * t - 6 * t * t) / h;
            out[3] = 3 * t * t - 2 * t;
            break;
        case 2:
            out[0] = (-6 + 12 * t) / (h * h);
            out[1] = (-4 + 6 * t) / h;
            out[2] = (6 - 12 * t) / (h * h);
            out[3] = (6 * t - 2) / h;
            break;
        default:
            out[0] = 12 / (h * h * h);
            out[1] = 6 / (h * h);
            out[2] = -12 / (h * h * h);
            out[3] = 6 / (h * h);
            break;
    }
}

}  // namespace

Complex HermiteSolution::eval(double y, int deriv) const {
    const auto& nodes = grid_->nodes;
    const int ne = static_cast<int>(nodes.size()) - 1;
    int e = static_cast<int>(y * ne);
    e = std::max(0, std::min(ne - 1, e));
    const double h = nodes[e + 1] - nodes[e];
    const double t = (y - nodes[e]) / h;
    double N[4];
    hermite_shapes(t, h, deriv, N);
    return N[0] * dofs_(2 * e) + N[1] * dofs_(2 * e + 1) +
           N[2] * dofs_(2 * e + 2) + N[3] * dofs_(2 * e + 3);
}

SymbolOperator::SymbolOperator(double k, Bc bc, const HermiteGrid1D& grid)
    : k_(k), bc_(bc), grid_(grid) {
    const int ne = grid_.n_elems();
    const int nraw = 2 * (ne + 1);
    keep_.assign(nraw, -1);
    int idx = 0;
    for (int i = 0; i < nraw; ++i) {
        const bool value_dof = (i % 2 == 0);
        const bool boundary_node = (i / 2 == 0 || i / 2 == ne);
        bool constrained = boundary_node &&
                           (bc == Bc::Clamped ? true : value_dof);
        if (!constrained) keep_[i] = idx++;
    }
    const int n = idx;
    n_reduced_ = n;
    mass_ = Eigen::MatrixXd::Zero(n, n);
    cross_ = Eigen::MatrixXd::Zero(n, n);
    bend_ = Eigen::MatrixXd::Zero(n, n);

    const quad::Rule& g = quad::gauss(4);
    for (int e = 0; e < ne; ++e) {
        const double h = grid_.nodes[e + 1] - grid_.nodes[e];
        double Me[4][4] = {}, Se[4][4] = {}, De[4][4] = {};
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double t = 0.5 * (g.x[q] + 1.0);
            const double w = 0.5 * g.w[q] * h;
            double N[4], N2[4];
            hermite_shapes(t, h, 0, N);
            hermite_shapes(t, h, 2, N2);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Me[i][j] += w * N[i] * N[j];
                    Se[i][j] += w * (N[i] * N2[j] + N2[i] * N[j]);
                    De[i][j] += w * N2[i] * N2[j];
                }
        }
        for (int i = 0; i < 4; ++i) {
            const int gi = keep_[2 * e + i];
            if (gi < 0) continue;
            for (int j = 0; j < 4; ++j) {
                const int gj = keep_[2 * e + j];
                if (gj < 0) continue;
                mass_(gi, gj) += Me[i][j];
                cross_(gi, gj) += Se[i][j];
                bend_(gi, gj) += De[i][j];
            }
        }
    }
}

Eigen::VectorXcd SymbolOperator::project_rhs(
    const std::function<Complex(double)>& rhs) const {
    const int ne = grid_.n_elems();
    Eigen::VectorXcd load = Eigen::VectorXcd::Zero(n_dofs());
    const quad::Rule& g = quad::gauss(10);
    for (int e = 0; e < ne; ++e) {
        const double y0 = grid_.nodes[e], h = grid_.nodes[e + 1] - y0;
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double t = 0.5 * (g.x[q] + 1.0);
            const double w = 0.5 * g.w[q] * h;
            double N[4];
            hermite_shapes(t, h, 0, N);
            const Complex f = rhs(y0 + t * h);
            for (int i = 0; i < 4; ++i) {
                const int gi = keep_[2 * e + i];
                if (gi >= 0) load(gi) += w * f * N[i];
            }
        }
    }
    return load;
}

HermiteSolution SymbolOperator::solve_k4(Complex lambda, Complex k4,
                                         const Eigen::VectorXcd& load) const {
    const Complex l2 = lambda * lambda;
    Eigen::MatrixXcd A = (l2 * l2 - k4) * mass_.cast<Complex>() +
                         l2 * cross_.cast<Complex>() + bend_.cast<Complex>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-14))
        throw NearSingularSymbol("solve_symbol: condition estimate " +
                                 std::to_string(1.0 / std::max(rc, 1e-300)));
    Eigen::VectorXcd x = lu.solve(load);
    const int ne = grid_.n_elems();
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(2 * (ne + 1));
    for (int i = 0; i < 2 * (ne + 1); ++i)
        if (keep_[i] >= 0) full(i) = x(keep_[i]);
    return HermiteSolution(&grid_, std::move(full));
}

HermiteSolution SymbolOperator::solve(Complex lambda,
                                      const Eigen::VectorXcd& load) const {
    const double k4 = k_ * k_ * k_ * k_;
    return solve_k4(lambda, Complex(k4, 0.0), load);
}

HermiteSolution SymbolOperator::solve(
    Complex lambda, const std::function<Complex(double)>& rhs) const {
    return solve(lambda, project_rhs(rhs));
}

std::pair<double, Complex> SymbolOperator::log_det(Complex lambda) const {
    const Complex l2 = lambda * lambda;
    const double k4 = k_ * k_ * k_ * k_;
    Eigen::MatrixXcd A = (l2 * l2 - k4) * mass_.cast<Complex>() +
                         l2 * cross_.cast<Complex>() + bend_.cast<Complex>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    double logabs = 0.0;
    Complex phase = static_cast<double>(lu.permutationP().determinant());
    for (int i = 0; i < A.rows(); ++i) {
        const Complex d = lu.matrixLU()(i, i);
        logabs += std::log(std::abs(d));
        phase *= d / std::abs(d);
    }
    return {logabs, phase};
}

Complex SymbolOperator::form_value(Complex lambda,
                                   const HermiteSolution& sol) const {
    const int ne = grid_.n_elems();
    Eigen::VectorXcd x(n_dofs());
    for (int i = 0; i < 2 * (ne + 1); ++i)
        if (keep_[i] >= 0) x(keep_[i]) = sol.dofs()(i);
    const Complex l2 = lambda * lambda;
    const double k4 = k_ * k_ * k_ * k_;
    Eigen::MatrixXcd A = (l2 * l2 - k4) * mass_.cast<Complex>() +
                         l2 * cross_.cast<Complex>() + bend_.cast<Complex>();
    return x.adjoint() * (A * x);
}

}  // namespace plate::transverse
