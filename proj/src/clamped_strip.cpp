#include "plate/clamped_strip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "plate/quadrature.hpp"

namespace plate::clamped_strip {

double SourceTerm::x_lo() const {
    double v = 1e300;
    for (const auto& t : terms) v = std::min(v, t.x_lo);
    return v;
}
double SourceTerm::x_hi() const {
    double v = -1e300;
    for (const auto& t : terms) v = std::max(v, t.x_hi);
    return v;
}

const SpectrumInfo& spectrum_info(double k) {
    static std::map<double, SpectrumInfo> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;

    SpectrumInfo info;
    info.etas = spectrum::clamped_etas(k);
    const double rho = 2.0 * k + 10.0;
    spectrum::SearchRegion region{-rho - 0.0123, rho + 0.00789,
                                  -rho - 0.00456, rho + 0.01011, rho, 0.2};
    auto all = spectrum::complex_exponents(k, Bc::Clamped, region);
    info.min_re_off_axis = 1e300;
    for (const auto& e : all) {
        if (std::abs(e.lambda.real()) < 1e-6) continue;
        info.off_axis.push_back(e.lambda);
        info.min_re_off_axis =
            std::min(info.min_re_off_axis, std::abs(e.lambda.real()));
    }
    if (info.off_axis.empty()) info.min_re_off_axis = 2.0;
    return cache.emplace(k, std::move(info)).first->second;
}

ContourSpec default_contour(double k) {
    spectrum::guard_threshold(k, Bc::Clamped);
    const SpectrumInfo& info = spectrum_info(k);
    ContourSpec spec;
    spec.beta = std::min(1.0, 0.5 * info.min_re_off_axis);
    spec.T = 40.0 + 4.0 * k;
    spec.n_quad = 2048;
    // residue circles must stay clear of the other eigenvalues
    double gap = 1e300;
    for (std::size_t i = 0; i < info.etas.size(); ++i) {
        gap = std::min(gap, 2.0 * info.etas[i]);  // distance to -iη_p
        for (std::size_t j = 0; j < info.etas.size(); ++j)
            if (i != j)
                gap = std::min(gap, std::abs(info.etas[i] - info.etas[j]));
        for (const Complex& z : info.off_axis)
            gap = std::min(gap, std::abs(z - Complex(0.0, info.etas[i])));
    }
    if (gap > 1e299) gap = 1.0;
    spec.residue_radius = std::min(0.4 * gap, 0.5);
    return spec;
}

namespace {

// X̂(λ) = ∫ e^{-λx} X(x) dx over the support, panels sized to the oscillation.
Complex laplace_x(const SeparableTerm& t, Complex lambda) {
    const double width = t.x_hi - t.x_lo;
    const int panels =
        std::max(8, static_cast<int>(std::ceil(width * std::abs(lambda) / 3.0)) + 2);
    return quad::integrate_panels(
        [&](double x) { return std::exp(-lambda * x) * t.X(x); }, t.x_lo,
        t.x_hi, panels, 10);
}

void check_contour_clear(double k, double beta) {
    const SpectrumInfo& info = spectrum_info(k);
    if (!info.etas.empty() && std::abs(beta) < 1e-3)
        throw EigenvalueNearContour("contour Re λ = " + std::to_string(-beta) +
                                    " within 1e-3 of the imaginary axis");
    for (const Complex& z : info.off_axis)
        if (std::abs(z.real() + beta) < 1e-3)
            throw EigenvalueNearContour("eigenvalue at Re λ = " +
                                        std::to_string(z.real()) +
                                        " within 1e-3 of the contour");
}

}  // namespace

Complex ContourSolution::eval(double x, double y, int dx, int dy) const {
    Complex s = 0.0;
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        const Complex lam = lambda_[j];
        Complex factor = weight_[j] * std::exp(lam * x);
        for (int d = 0; d < dx; ++d) factor *= lam;
        transverse::HermiteSolution sol(grid_.get(), dofs_[j]);
        s += factor * sol.eval(y, dy);
    }
    return s;
}

ContourSolution contour_solve(const SourceTerm& f, double k,
                              const ContourSpec& spec,
                              const transverse::HermiteGrid1D& grid) {
    spectrum::guard_threshold(k, Bc::Clamped);
    check_contour_clear(k, spec.beta);
    transverse::SymbolOperator op(k, Bc::Clamped, grid);

    std::vector<Eigen::VectorXcd> loads;
    loads.reserve(f.terms.size());
    for (const auto& t : f.terms) loads.push_back(op.project_rhs(t.Y));

    ContourSolution u;
    u.grid_ = std::make_shared<transverse::HermiteGrid1D>(grid);
    const int n = spec.n_quad;
    const double ds = 2.0 * spec.T / n;
    u.lambda_.resize(n + 1);
    u.weight_.resize(n + 1);
    u.dofs_.resize(n + 1);
    // nodes are independent 1D solves; each worker writes its own slots, so
    // the result does not depend on the schedule
    auto run_range = [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            const double s = -spec.T + j * ds;
            const Complex lam(-spec.beta, s);
            Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(op.n_dofs());
            for (std::size_t t = 0; t < f.terms.size(); ++t)
                rhs += laplace_x(f.terms[t], lam) * loads[t];
            transverse::HermiteSolution sol = op.solve(lam, rhs);
            u.lambda_[j] = lam;
            // 1/(2πi) dλ = ds/(2π); trapezoid halves the endpoints
            const double w = (j == 0 || j == n) ? 0.5 * ds : ds;
            u.weight_[j] = Complex(w / (2.0 * kPi), 0.0);
            u.dofs_[j] = sol.dofs();
        }
    };
    const int workers = std::min(worker_count(), n + 1);
    if (workers <= 1) {
        run_range(0, n + 1);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + workers) / workers;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run_range, w * chunk,
                              std::min(n + 1, (w + 1) * chunk));
        for (auto& t : pool) t.join();
    }
    return u;
}

namespace {

Complex residue_once(const SourceTerm& f, Complex lambda0, int n_circle,
                     double radius, const transverse::SymbolOperator& op,
                     const std::vector<Eigen::VectorXcd>& loads,
                     const transverse::HermiteGrid1D& grid,
                     const transverse::ModeProfile& phi) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(2 * (grid.n_elems() + 1));
    for (int j = 0; j < n_circle; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / n_circle;
        const Complex lam = lambda0 + radius * Complex(std::cos(th), std::sin(th));
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(op.n_dofs());
        for (std::size_t t = 0; t < f.terms.size(); ++t)
            rhs += laplace_x(f.terms[t], lam) * loads[t];
        transverse::HermiteSolution sol = op.solve(lam, rhs);
        acc += (lam - lambda0) * sol.dofs();
    }
    acc /= static_cast<double>(n_circle);
    transverse::HermiteSolution M(&grid, acc);
    // bilinear projection on φ_p (the residue is proportional to φ_p)
    const Complex num = quad::integrate_panels(
        [&](double y) { return M.eval(y) * phi.eval(y); }, 0.0, 1.0, 32, 8);
    const Complex den = quad::integrate_panels(
        [&](double y) { return phi.eval(y) * phi.eval(y); }, 0.0, 1.0, 32, 8);
    return num / den;
}

}  // namespace

Complex residue_coefficient(const SourceTerm& f, int p, int sign, double k,
                            const ContourSpec& spec,
                            const transverse::HermiteGrid1D& grid) {
    try {
        spectrum::guard_threshold(k, Bc::Clamped);
    } catch (const ThresholdWavenumber&) {
        throw MultiplicityTwo("residue_coefficient: threshold wavenumber has "
                              "a multiplicity-two exponent at λ=0");
    }
    const SpectrumInfo& info = spectrum_info(k);
    if (p < 1 || p > static_cast<int>(info.etas.size()))
        throw NotAnEigenvalue("residue_coefficient: no propagating mode p=" +
                              std::to_string(p));
    const Complex lambda0(0.0, sign * info.etas[p - 1]);
    transverse::ModeProfile phi(lambda0, k, Bc::Clamped);
    phi.normalize_flux();
    transverse::SymbolOperator op(k, Bc::Clamped, grid);
    std::vector<Eigen::VectorXcd> loads;
    for (const auto& t : f.terms) loads.push_back(op.project_rhs(t.Y));

    const Complex c16 =
        residue_once(f, lambda0, 16, spec.residue_radius, op, loads, grid, phi);
    const Complex c32 =
        residue_once(f, lambda0, 32, spec.residue_radius, op, loads, grid, phi);
    if (std::abs(c32 - c16) > 1e-6 * std::max(1.0, std::abs(c32)) + 1e-9)
        throw Error("residue_coefficient: circle quadrature did not converge");
    return c32;
}

// ---------------------------------------------------------------------------
// Detached asymptotics
// ---------------------------------------------------------------------------

Complex DecomposedField::eval(double x, double y, int dx, int dy) const {
    Complex s = v_.eval(x, y, dx, dy);
    for (std::size_t p = 0; p < a.size(); ++p) {
        const Complex ie(0.0, etas[p]);
        Complex factor = std::exp(ie * x);
        for (int d = 0; d < dx; ++d) factor *= ie;
        s += a[p] * factor * profiles_[p].eval(y, dy);
    }
    return s;
}

Complex DecomposedField::eval_remainder(double x, double y) const {
    Complex s = eval(x, y);
    const double chp = ramp(x, cutoff_L, cutoff_L);
    const double chm = ramp(-x, cutoff_L, cutoff_L);
    for (std::size_t p = 0; p < a.size(); ++p) {
        const Complex ie(0.0, etas[p]);
        if (chp > 0.0) s -= a[p] * chp * std::exp(ie * x) * profiles_[p].eval(y);
        if (chm > 0.0) s -= b[p] * chm * std::exp(-ie * x) * profiles_[p].eval(y);
    }
    return s;
}

Field DecomposedField::field() const {
    return [self = *this](double x, double y, int dx, int dy) {
        return self.eval(x, y, dx, dy);
    };
}

DecomposedField radiating_solution(const SourceTerm& f, double k,
                                   const ContourSpec& spec,
                                   const transverse::HermiteGrid1D& grid) {
    DecomposedField out;
    out.beta = spec.beta;
    out.k_ = k;
    out.v_ = contour_solve(f, k, spec, grid);
    const SpectrumInfo& info = spectrum_info(k);
    out.etas = info.etas;
    out.cutoff_L = std::max(1.0, std::max(std::abs(f.x_lo()), std::abs(f.x_hi())));
    for (std::size_t p = 0; p < info.etas.size(); ++p) {
        transverse::ModeProfile phi(Complex(0.0, info.etas[p]), k, Bc::Clamped);
        phi.normalize_flux();
        out.profiles_.push_back(phi);
        // closing the contour to the right for x → -∞ picks up -residues;
        // adding c_p^+ w_p^+ makes the field outgoing
        const Complex cp = residue_coefficient(f, static_cast<int>(p) + 1, +1,
                                               k, spec, grid);
        const Complex cm = residue_coefficient(f, static_cast<int>(p) + 1, -1,
                                               k, spec, grid);
        out.a.push_back(cp);
        out.b.push_back(-cm);
    }
    return out;
}

DecomposedField radiating_solution(const SourceTerm& f, double k) {
    transverse::HermiteGrid1D grid(64);
    return radiating_solution(f, k, default_contour(k), grid);
}

Field mode_field(int p, int sign, double k) {
    const SpectrumInfo& info = spectrum_info(k);
    if (p < 1 || p > static_cast<int>(info.etas.size()))
        throw NotPropagating("mode_field: p out of range");
    const double eta = info.etas[p - 1];
    auto phi = std::make_shared<transverse::ModeProfile>(Complex(0.0, eta), k,
                                                         Bc::Clamped);
    phi->normalize_flux();
    const Complex ie(0.0, sign * eta);
    return [phi, ie](double x, double y, int dx, int dy) {
        Complex factor = std::exp(ie * x);
        for (int d = 0; d < dx; ++d) factor *= ie;
        return factor * phi->eval(y, dy);
    };
}

Field cutoff_field(const Field& u, int sign, double L) {
    return [u, sign, L](double x, double y, int dx, int dy) {
        const double xs = sign > 0 ? x : -x;
        Complex s = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= dx; ++j) {
            double chi = ramp(xs, L, L, j);
            if (sign < 0 && (j % 2)) chi = -chi;
            if (chi != 0.0) s += binom * chi * u(x, y, dx - j, dy);
            binom = binom * (dx - j) / (j + 1);
        }
        return s;
    };
}

Complex symplectic_form(const Field& u, const Field& v, double H) {
    Complex q = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double x = side ? H : -H;
        const double nsign = side ? 1.0 : -1.0;
        q += nsign * quad::integrate_panels(
                         [&](double y) {
                             const Complex dnLu = u(x, y, 3, 0) + u(x, y, 1, 2);
                             const Complex dnLv = v(x, y, 3, 0) + v(x, y, 1, 2);
                             const Complex Lu = u(x, y, 2, 0) + u(x, y, 0, 2);
                             const Complex Lv = v(x, y, 2, 0) + v(x, y, 0, 2);
                             return dnLu * std::conj(v(x, y, 0, 0)) -
                                    u(x, y, 0, 0) * std::conj(dnLv) -
                                    Lu * std::conj(v(x, y, 1, 0)) +
                                    u(x, y, 1, 0) * std::conj(Lv);
                         },
                         0.0, 1.0, 16, 8);
    }
    return q;
}

FluxCoefficients flux_extract(const Field& u, double k, double H,
                              double cutoff_L) {
    const SpectrumInfo& info = spectrum_info(k);
    FluxCoefficients out;
    const Complex i(0.0, 1.0);
    for (std::size_t p = 0; p < info.etas.size(); ++p) {
        Field wp = mode_field(static_cast<int>(p) + 1, +1, k);
        Field wm = mode_field(static_cast<int>(p) + 1, -1, k);
        out.a.push_back(i * symplectic_form(u, cutoff_field(wp, +1, cutoff_L), H));
        out.b.push_back(i * symplectic_form(u, cutoff_field(wm, -1, cutoff_L), H));
    }
    return out;
}

SourceTerm planted_mode_source(int p, int sign, int side, double k, double L,
                               int order) {
    const SpectrumInfo& info = spectrum_info(k);
    if (p < 1 || p > static_cast<int>(info.etas.size()))
        throw NotPropagating("planted_mode_source: p out of range");
    const double eta = info.etas[p - 1];
    auto phi = std::make_shared<transverse::ModeProfile>(Complex(0.0, eta), k,
                                                         Bc::Clamped);
    phi->normalize_flux();
    const Complex ie(0.0, sign * eta);
    auto chi = [side, L, order](double x, int d) {
        double c = ramp(side > 0 ? x : -x, L, L, d, order);
        if (side < 0 && (d % 2)) c = -c;
        return c;
    };
    // (Δ²-k⁴)(χ w) = e^{iηx} [(χ'''' + 4iηχ''' - 6η²χ'' - 4iη³χ')φ
    //                          + 2(χ'' + 2iηχ')φ'']
    SeparableTerm t1, t2;
    const double lo = side > 0 ? L : -2.0 * L;
    const double hi = side > 0 ? 2.0 * L : -L;
    t1.x_lo = t2.x_lo = lo;
    t1.x_hi = t2.x_hi = hi;
    t1.X = [chi, ie](double x) {
        return std::exp(ie * x) *
               (chi(x, 4) + 4.0 * ie * chi(x, 3) + 6.0 * ie * ie * chi(x, 2) +
                4.0 * ie * ie * ie * chi(x, 1));
    };
    t1.Y = [phi](double y) { return phi->eval(y, 0); };
    t2.X = [chi, ie](double x) {
        return std::exp(ie * x) * 2.0 * (chi(x, 2) + 2.0 * ie * chi(x, 1));
    };
    t2.Y = [phi](double y) { return phi->eval(y, 2); };
    SourceTerm f;
    f.terms = {t1, t2};
    return f;
}

}  // namespace plate::clamped_strip
