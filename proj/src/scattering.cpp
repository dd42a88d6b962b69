#include "plate/scattering.hpp"

#include <cmath>

#include "plate/spectrum.hpp"
#include "plate/transverse.hpp"

namespace plate::scattering {

Complex incident_value(const IncidentMode& mode, double x, double y, int dx,
                       int dy) {
    const double mu = kPi * kPi * mode.p * mode.p;
    if (mode.k * mode.k <= mu)
        throw NotPropagating("incident mode p=" + std::to_string(mode.p) +
                             " beyond cutoff");
    const double eta = std::sqrt(mode.k * mode.k - mu);
    const Complex i(0.0, 1.0);
    const Complex ie = Complex(0.0, mode.direction * eta);
    const double norm = 1.0 / std::sqrt(2.0 * eta);
    return norm * std::pow(ie, dx) * std::exp(ie * x) *
           transverse::theta(mode.p, y, dy);
}

double cutoff_zeta(const CutoffSpec& z, double x, int deriv) {
    // ζ(x) = ramp(x) + ramp(-x): rises from 0 to 1 on each band ±[x0, x0+w]
    const double r = ramp(x, z.x0, z.w, deriv);
    const double l = ramp(-x, z.x0, z.w, deriv);
    return r + ((deriv % 2 == 0) ? l : -l);
}

fem::ScalarField2D lifted_source(const IncidentMode& mode, const CutoffSpec& z,
                                 double k, const fem::StripMesh& mesh) {
    if (z.x0 <= 0.0 || z.w <= 0.0 || z.x0 + z.w >= mesh.L())
        throw ValidationError("lifted_source: cutoff band must fit in (0, L)");
    if (mesh.hole()) {
        const fem::HoleRect& h = *mesh.hole();
        if (std::max(std::abs(h.x0), std::abs(h.x1)) >= z.x0)
            throw CutoffOverlapsHole(
                "lifted_source: cutoff transition band touches the hole");
    }
    const double mu = kPi * kPi * mode.p * mode.p;
    const double eta = std::sqrt(k * k - mu);
    const Complex ie(0.0, mode.direction * eta);
    const int p = mode.p;
    const double x0 = z.x0, w = z.w;
    CutoffSpec zz{x0, w};
    const double norm = 1.0 / std::sqrt(2.0 * eta);
    // f = -[ζ'''' X + 4 ζ''' X' + 6 ζ'' X'' + 4 ζ' X''' - 2μ (ζ'' X + 2 ζ' X')] θ_p
    return [=](double x, double y) -> Complex {
        const double z1 = cutoff_zeta(zz, x, 1);
        if (z1 == 0.0) {
            if (cutoff_zeta(zz, x, 2) == 0.0) return 0.0;
        }
        const double z2 = cutoff_zeta(zz, x, 2);
        const double z3 = cutoff_zeta(zz, x, 3);
        const double z4 = cutoff_zeta(zz, x, 4);
        const Complex X = norm * std::exp(ie * x);
        const Complex X1 = ie * X, X2 = ie * X1, X3 = ie * X2;
        const Complex fx = z4 * X + 4.0 * z3 * X1 + 6.0 * z2 * X2 +
                           4.0 * z1 * X3 - 2.0 * mu * (z2 * X + 2.0 * z1 * X1);
        return -fx * std::sqrt(2.0) * std::sin(kPi * p * y);
    };
}

std::vector<Complex> extract_outgoing(const fem::PlateField& field,
                                      dtn::Side side, double k, int n) {
    dtn::TraceCoefficients tc = fem::modal_traces(field, side, n);
    std::vector<Complex> a(n);
    for (int p = 1; p <= n; ++p) {
        auto [ap, bp] = dtn::invert_trace(p, k, tc.g[p - 1], tc.h[p - 1]);
        a[p - 1] = ap;
    }
    return a;
}

double ScatteringMatrix::unitarity_defect() const {
    return (S * S.conjugate().transpose() -
            Eigen::MatrixXcd::Identity(2 * n, 2 * n))
        .norm();
}

double ScatteringMatrix::symmetry_defect() const {
    return (S - S.transpose()).norm();
}

ScatteringMatrix scattering_matrix(double k, const fem::StripMesh& mesh,
                                   const ScatterOptions& opt) {
    spectrum::guard_threshold(k, Bc::SimplySupported);
    const int n = dtn::propagating_count(k);
    if (n < 1) throw Error("scattering_matrix: no propagating mode at k");

    CutoffSpec zeta = opt.zeta;
    if (zeta.w <= 0.0) {
        // default band: clear of the hole, flat well before Σ_{±L}
        double inner = 0.0;
        if (mesh.hole())
            inner = std::max(std::abs(mesh.hole()->x0), std::abs(mesh.hole()->x1));
        zeta.x0 = inner + 0.1 * (mesh.L() - inner);
        zeta.w = 0.6 * (mesh.L() - zeta.x0);
    }

    fem::AssembledSystem sys = fem::assemble_plate(
        mesh, opt.nu, k, fem::EssentialBc::SimplySupportedStrip);
    fem::assemble_dtn_coupling(sys, opt.p_max);
    fem::PlateSolver solver(sys);

    std::vector<double> eta(n);
    for (int p = 1; p <= n; ++p) eta[p - 1] = std::sqrt(k * k - kPi * kPi * p * p);

    ScatteringMatrix out;
    out.n = n;
    out.S = Eigen::MatrixXcd::Zero(2 * n, 2 * n);

    for (int row = 0; row < 2 * n; ++row) {
        // rows 0..n-1: incidence w_p^- (from the right); rows n..2n-1: w_p^+
        const int p = row % n + 1;
        const int dir = (row < n) ? -1 : +1;
        IncidentMode ui{p, dir, k};
        fem::ScalarField2D f = lifted_source(ui, zeta, k, mesh);
        Eigen::VectorXcd load = fem::project_load(mesh, f, 6);
        fem::PlateField v = solver.solve_with_load(load);
        out.solve_residuals.push_back(solver.last_residual());

        std::vector<Complex> aR = extract_outgoing(v, dtn::Side::Right, k, n);
        std::vector<Complex> aL = extract_outgoing(v, dtn::Side::Left, k, n);
        for (int m = 1; m <= n; ++m) {
            // local frame e^{iη_m(x∓L)} -> global-frame w_m^± amplitude
            const Complex conv =
                std::sqrt(2.0 * eta[m - 1]) *
                std::exp(Complex(0.0, -eta[m - 1] * mesh.L()));
            out.S(row, m - 1) += conv * aR[m - 1];
            out.S(row, n + m - 1) += conv * aL[m - 1];
        }
        // incident pass-through: w_p^- continues to -∞, w_p^+ to +∞
        if (dir < 0)
            out.S(row, n + p - 1) += 1.0;
        else
            out.S(row, p - 1) += 1.0;
    }
    return out;
}

}  // namespace plate::scattering
