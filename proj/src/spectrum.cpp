#include "plate/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "plate/transverse.hpp"

namespace plate::spectrum {

namespace {

// cos(k) - sech(k), the overflow-safe form of cos(k)cosh(k) = 1.
double threshold_fn(double k) {
    const double e = std::exp(-k);
    return std::cos(k) - 2.0 * e / (1.0 + e * e);
}

double threshold_fn_deriv(double k) {
    const double e = std::exp(-k);
    const double sech = 2.0 * e / (1.0 + e * e);
    const double tanh = (1.0 - e * e) / (1.0 + e * e);
    return -std::sin(k) + sech * tanh;
}

double solve_clamped_threshold(int n) {
    double a = n * kPi - 1.0, b = n * kPi + 2.0;
    double fa = threshold_fn(a), fb = threshold_fn(b);
    if (fa * fb > 0.0)
        throw BracketFailure("thresholds: no sign change in (n*pi-1, n*pi+2), n=" +
                             std::to_string(n));
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = threshold_fn(m);
        if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a < 1e-6) break;
    }
    // safeguarded Newton polish
    double x = 0.5 * (a + b);
    for (int it = 0; it < 60; ++it) {
        const double f = threshold_fn(x);
        const double d = threshold_fn_deriv(x);
        double step = f / d;
        double xn = x - step;
        if (xn <= a || xn >= b) xn = 0.5 * (a + b);  // fall back to bisection
        const double fn = threshold_fn(xn);
        if (fa * fn <= 0.0) b = xn; else a = xn;
        x = xn;
        if (std::abs(fn) < 1e-13) break;
    }
    return x;
}

}  // namespace

ThresholdTable thresholds(Bc bc, int n_max) {
    if (n_max < 1) throw Error("thresholds: n_max must be >= 1");
    ThresholdTable t;
    t.bc = bc;
    t.k.reserve(n_max);
    for (int n = 1; n <= n_max; ++n)
        t.k.push_back(bc == Bc::SimplySupported ? n * kPi
                                                : solve_clamped_threshold(n));
    return t;
}

void guard_threshold(double k, Bc bc, double tol) {
    if (k <= 0.0) throw Error("wavenumber must be positive");
    if (bc == Bc::SimplySupported) {
        const double r = k / kPi;
        if (std::abs(r - std::round(r)) * kPi < tol && std::round(r) >= 1.0)
            throw ThresholdWavenumber(k);
        return;
    }
    const int n_hi = static_cast<int>(k / kPi) + 2;
    ThresholdTable t = thresholds(Bc::Clamped, n_hi);
    for (double kn : t.k)
        if (std::abs(k - kn) < tol) throw ThresholdWavenumber(k);
}

std::vector<ModalExponent> simply_supported_exponents(double k, int p_max) {
    guard_threshold(k, Bc::SimplySupported);
    std::vector<ModalExponent> out;
    for (int p = 1; p <= p_max; ++p) {
        const double mu = kPi * kPi * p * p;
        ModalExponent plus, minus;
        if (k * k > mu) {
            const double eta = std::sqrt(k * k - mu);
            plus.lambda = Complex(0.0, eta);
            minus.lambda = Complex(0.0, -eta);
            plus.cls = minus.cls = ModeClass::Propagating;
        } else {
            const double r = std::sqrt(mu - k * k);
            plus.lambda = Complex(r, 0.0);
            minus.lambda = Complex(-r, 0.0);
            plus.cls = minus.cls = ModeClass::RealEvanescent;
        }
        out.push_back(plus);
        out.push_back(minus);
        const double g = std::sqrt(k * k + mu);
        out.push_back({Complex(g, 0.0), ModeClass::RealEvanescent, 1, 1});
        out.push_back({Complex(-g, 0.0), ModeClass::RealEvanescent, 1, 1});
    }
    return out;
}

std::vector<double> clamped_etas(double k) {
    guard_threshold(k, Bc::Clamped);
    std::vector<double> taus;
    int n_grid = 2048;
    for (int attempt = 0; attempt < 4; ++attempt) {
        taus.clear();
        double prev_tau = 0.0;
        double prev = transverse::h_clamped(k, 0.0);
        bool adjacent = false;
        for (int i = 1; i <= n_grid; ++i) {
            const double tau = static_cast<double>(i) / n_grid;
            const double cur = transverse::h_clamped(k, std::min(tau, 1.0 - 1e-13));
            if (prev == 0.0) prev = cur;  // grid point exactly on a root
            if (prev * cur < 0.0) {
                // bisection
                double a = prev_tau, b = tau, fa = prev;
                for (int it = 0; it < 80; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = transverse::h_clamped(k, m);
                    if (fa * fm <= 0.0) b = m; else { a = m; fa = fm; }
                }
                double t0 = 0.5 * (a + b);
                // Newton polish on h_k
                for (int it = 0; it < 40; ++it) {
                    const double f = transverse::h_clamped(k, t0);
                    const double d = (transverse::h_clamped(k, t0 + 1e-7) -
                                      transverse::h_clamped(k, t0 - 1e-7)) / 2e-7;
                    if (std::abs(d) < 1e-30) break;
                    const double step = f / d;
                    t0 -= step;
                    if (std::abs(f) < 1e-12 && std::abs(step) < 1e-13) break;
                }
                if (!taus.empty() && std::abs(t0 - taus.back()) < 2.0 / n_grid)
                    adjacent = true;
                taus.push_back(t0);
            }
            prev = cur;
            prev_tau = tau;
        }
        if (!adjacent) break;
        n_grid *= 2;  // roots too close for the scan: refine and redo
    }
    std::vector<double> etas;
    etas.reserve(taus.size());
    for (double t : taus) etas.push_back(t * k);
    std::sort(etas.begin(), etas.end());
    return etas;
}

std::vector<ModalExponent> clamped_propagating(double k) {
    std::vector<ModalExponent> out;
    for (double eta : clamped_etas(k)) {
        out.push_back({Complex(0.0, eta), ModeClass::Propagating, 1, 1});
        out.push_back({Complex(0.0, -eta), ModeClass::Propagating, 1, 1});
    }
    std::sort(out.begin(), out.end(), [](const ModalExponent& a, const ModalExponent& b) {
        return std::abs(a.lambda) < std::abs(b.lambda);
    });
    return out;
}

SearchRegion default_region(double k) {
    const double rho = 2.0 * k + 10.0;
    return {-rho, rho, -rho, rho, rho, 0.2};
}

namespace {

Complex disp(Complex z, double k, Bc bc) {
    // complex_exponents needs a function analytic across the whole region;
    // the clamped entire determinant avoids the basis-switch seam.
    if (bc == Bc::Clamped) return transverse::det_clamped_entire(z, k);
    return transverse::det_dispersion(z, k, bc);
}

// |det| together with the magnitude of the terms that cancel to produce it;
// |det| below eps·scale is numerically indistinguishable from a zero.
std::pair<Complex, double> disp_scaled(Complex z, double k, Bc bc) {
    const Complex P = z * z + k * k, M = z * z - k * k;
    const Complex tP = branch_sqrt(P), tM = branch_sqrt(M);
    const double bP = std::cosh(tP.imag()) / std::max(std::abs(tP), 1.0);
    const double bM = std::cosh(tM.imag()) / std::max(std::abs(tM), 1.0);
    if (bc == Bc::SimplySupported)
        return {sinc(tP) * sinc(tM), bP * bM};
    const double scale = 2.0 * std::norm(z) * bP * bM +
                         2.0 * std::cosh(tP.imag()) * std::cosh(tM.imag()) + 2.0;
    return {transverse::det_clamped_entire(z, k), scale};
}

// Winding number of disp along the rectangle boundary; edges sampled
// adaptively until phase increments stay below π/2.
struct BoxScan {
    double k;
    Bc bc;
    int evals = 0;

    double edge_winding(Complex a, Complex b) {
        int n = 8;
        for (int attempt = 0; attempt < 14; ++attempt) {
            double total = 0.0;
            bool ok = true;
            auto [fprev, sprev] = disp_scaled(a, k, bc);
            for (int i = 1; i <= n; ++i) {
                Complex z = a + (b - a) * (static_cast<double>(i) / n);
                auto [f, s] = disp_scaled(z, k, bc);
                evals += 2;
                // the phase is garbage once |det| reaches the cancellation
                // noise of its own terms
                if (std::abs(f) < 1e-12 * s || std::abs(fprev) < 1e-12 * sprev)
                    throw ContourThroughZero(
                        "argument scan: |det| at the cancellation noise floor");
                double d = std::arg(f / fprev);
                if (std::abs(d) > 0.5 * kPi) {
                    ok = false;
                    break;
                }
                total += d;
                fprev = f;
                sprev = s;
            }
            if (ok) return total;
            n *= 2;
        }
        // a zero is pinned to the edge: let the caller perturb the box
        throw ContourThroughZero("argument scan: edge refinement did not settle");
    }

    int winding(double x0, double x1, double y0, double y1) {
        const Complex c00(x0, y0), c10(x1, y0), c11(x1, y1), c01(x0, y1);
        double s = edge_winding(c00, c10) + edge_winding(c10, c11) +
                   edge_winding(c11, c01) + edge_winding(c01, c00);
        return static_cast<int>(std::lround(s / (2.0 * kPi)));
    }
};

Complex newton_polish(Complex z, double k, Bc bc) {
    for (int it = 0; it < 80; ++it) {
        const double h = std::max(1e-7, 1e-9 * std::abs(z));
        const Complex f = disp(z, k, bc);
        const Complex d = (disp(z + h, k, bc) - disp(z - h, k, bc)) / (2.0 * h);
        if (std::abs(d) < 1e-300) break;
        const Complex step = f / d;
        z -= step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

void classify(ModalExponent& e) {
    const Complex z = e.lambda;
    const double t = 1e-9 * std::max(1.0, std::abs(z));
    if (std::abs(z) < t)
        e.cls = ModeClass::Zero;
    else if (std::abs(z.real()) < t)
        e.cls = ModeClass::Propagating;
    else if (std::abs(z.imag()) < t)
        e.cls = ModeClass::RealEvanescent;
    else
        e.cls = ModeClass::Complex;
}

void subdivide(BoxScan& scan, double x0, double x1, double y0, double y1,
               int depth, std::vector<ModalExponent>& out) {
    int w = 0;
    bool counted = false;
    for (int attempt = 0; attempt < 5 && !counted; ++attempt) {
        try {
            w = scan.winding(x0, x1, y0, y1);
            counted = true;
        } catch (const ContourThroughZero&) {
            // perturb (expand) the box and retry; overlaps are deduplicated
            const double dx = 1.37e-4 * (attempt + 1) * (x1 - x0 + 1.0);
            const double dy = 0.83e-4 * (attempt + 1) * (y1 - y0 + 1.0);
            x0 -= dx; x1 += 2.0 * dx; y0 -= dy; y1 += 2.0 * dy;
        }
    }
    if (!counted)
        throw ContourThroughZero("complex_exponents: box kept hitting a zero");
    if (w == 0) return;
    const double diam = std::max(x1 - x0, y1 - y0);
    const bool tiny = diam < 1e-8 || depth > 60;
    if (w == 1 && (diam < 0.2 || tiny)) {
        Complex z = newton_polish(Complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                                  scan.k, scan.bc);
        const double slack = 0.25 * diam + 1e-9;
        const bool inside = z.real() > x0 - slack && z.real() < x1 + slack &&
                            z.imag() > y0 - slack && z.imag() < y1 + slack;
        if (inside || tiny) {
            ModalExponent e;
            e.lambda = z;
            e.alg_mult = 1;
            classify(e);
            out.push_back(e);
            return;
        }
        // Newton escaped the box: fall through and subdivide further
    } else if (tiny) {
        // unresolved multiple zero: report the center with the winding count
        ModalExponent e;
        e.lambda = Complex(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        e.alg_mult = w;
        classify(e);
        out.push_back(e);
        return;
    }
    if (x1 - x0 >= y1 - y0) {
        const double xm = x0 + 0.5000731 * (x1 - x0);
        subdivide(scan, x0, xm, y0, y1, depth + 1, out);
        subdivide(scan, xm, x1, y0, y1, depth + 1, out);
    } else {
        const double ym = y0 + 0.5000731 * (y1 - y0);
        subdivide(scan, x0, x1, y0, ym, depth + 1, out);
        subdivide(scan, x0, x1, ym, y1, depth + 1, out);
    }
}

}  // namespace

std::vector<ModalExponent> complex_exponents(double k, Bc bc,
                                             const SearchRegion& region) {
    BoxScan scan{k, bc};
    std::vector<ModalExponent> out;
    subdivide(scan, region.re_min, region.re_max, region.im_min, region.im_max,
              0, out);
    // de-duplicate (perturbed boxes may overlap) and sort by (Re, Im)
    std::sort(out.begin(), out.end(), [](const ModalExponent& a, const ModalExponent& b) {
        if (a.lambda.real() != b.lambda.real())
            return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    std::vector<ModalExponent> uniq;
    for (const auto& e : out) {
        if (!uniq.empty() && std::abs(e.lambda - uniq.back().lambda) < 1e-7)
            continue;
        uniq.push_back(e);
    }
    return uniq;
}

int algebraic_multiplicity(Complex lambda, double k, Bc bc) {
    auto f = [&](Complex z) { return disp(z, k, bc); };
    const double h = 1e-4 * std::max(1.0, std::abs(lambda));
    // 5-point stencil for f'
    const Complex d1 = (-f(lambda + 2.0 * h) + 8.0 * f(lambda + h) -
                        8.0 * f(lambda - h) + f(lambda - 2.0 * h)) /
                       (12.0 * h);
    double scale = 0.0;
    for (Complex z : {lambda + h, lambda - h, lambda + Complex(0, h)})
        scale = std::max(scale, std::abs(f(z)));
    scale /= h;
    const double noise = 1e-10 * std::max(scale, 1e-6);
    if (std::abs(d1) > 1e-6 * std::max(scale, 1.0)) return 1;
    if (std::abs(d1) < 10.0 * noise) {
        // derivative vanishes: second derivative decides multiplicity two
        const Complex d2 = (f(lambda + h) - 2.0 * f(lambda) + f(lambda - h)) / (h * h);
        if (std::abs(d2) > 1e-6 * std::max(scale / h, 1.0)) return 2;
    }
    throw Inconclusive("algebraic_multiplicity: derivative within noise floor");
}

DegenerateReport degenerate_k(double k, double tol) {
    if (k <= 0.0) throw Error("degenerate_k: k must be positive");
    DegenerateReport rep;
    const double c = kPi / std::sqrt(2.0);
    for (int n = 1;; ++n) {
        const double smallest = c * std::sqrt(static_cast<double>((n + 2) * (n + 2) - n * n));
        if (smallest > k + tol) break;
        for (int m = n + 2;; m += 2) {
            const double kmn = c * std::sqrt(static_cast<double>(m * m - n * n));
            if (kmn > k + tol) break;
            if (std::abs(kmn - k) <= tol) {
                rep.member = true;
                rep.pairs.emplace_back(m, n);
                rep.lambda_part.push_back(c * std::sqrt(static_cast<double>(m * m + n * n)));
            }
        }
    }
    return rep;
}

}  // namespace plate::spectrum
