#include "plate/common.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "plate/quadrature.hpp"

namespace plate {

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("PLATE_THREADS"))
        n = std::min(n, std::max(1, std::atoi(env)));
    return std::min(n, 8);
}

}  // namespace plate

namespace plate::quad {

namespace {
Rule compute_rule(int n) {
    // Newton iteration on Legendre polynomials.
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;  // ascending
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}
}  // namespace

const Rule& gauss(int n) {
    // common orders come from a lock-free table (parallel contour workers
    // hit this on every panel)
    constexpr int kMax = 32;
    static const std::vector<Rule> table = [] {
        std::vector<Rule> t(kMax + 1);
        for (int m = 1; m <= kMax; ++m) t[m] = compute_rule(m);
        return t;
    }();
    if (n >= 1 && n <= kMax) return table[n];
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

}  // namespace plate::quad

namespace plate {

Complex branch_sqrt(Complex z) {
    double nu = std::arg(z);           // (-pi, pi]
    if (nu < 0.0) nu += 2.0 * kPi;     // [0, 2pi)
    double r = std::sqrt(std::abs(z));
    return {r * std::cos(0.5 * nu), r * std::sin(0.5 * nu)};
}

Complex sinc(Complex z) {
    if (std::abs(z) < 1e-3) {
        // 1 - z^2/6 + z^4/120 - z^6/5040 + z^8/362880
        Complex z2 = z * z;
        return 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 +
               z2 * (-1.0 / 5040.0 + z2 / 362880.0)));
    }
    return std::sin(z) / z;
}

Complex cosm1_over_z2(Complex z) {
    if (std::abs(z) < 1e-3) {
        // -1/2 + z^2/24 - z^4/720 + z^6/40320
        Complex z2 = z * z;
        return -0.5 + z2 * (1.0 / 24.0 + z2 * (-1.0 / 720.0 + z2 / 40320.0));
    }
    return (std::cos(z) - 1.0) / (z * z);
}

double smoothstep(int n, double t, int deriv) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return deriv == 0 ? 1.0 : 0.0;
    // s_n(t) = t^{n+1} Σ_{j=0}^{n} C(n+j,j) C(2n+1,n-j) (-t)^j
    auto binom = [](int a, int b) {
        double r = 1.0;
        for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
        const int m = n + 1 + j;  // monomial degree
        double c = binom(n + j, j) * binom(2 * n + 1, n - j) *
                   ((j % 2) ? -1.0 : 1.0);
        for (int d = 0; d < deriv; ++d) c *= (m - d);
        if (m - deriv >= 0) s += c * std::pow(t, m - deriv);
    }
    return s;
}

double ramp(double x, double x0, double w, int deriv, int order) {
    double s = smoothstep(order, (x - x0) / w, deriv);
    return s / std::pow(w, deriv);
}

}  // namespace plate
