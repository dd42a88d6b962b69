#pragma once

#include <functional>
#include <vector>

#include "plate/common.hpp"

namespace plate::quad {

/// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order.
struct Rule {
    std::vector<double> x, w;
};
const Rule& gauss(int n);

/// ∫_a^b f dx with an n-point rule.
template <class F>
auto integrate(F&& f, double a, double b, int n) {
    const Rule& r = gauss(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) s{};
    for (std::size_t i = 0; i < r.x.size(); ++i)
        s += r.w[i] * f(mid + half * r.x[i]);
    return half * s;
}

/// Composite rule: `panels` equal panels of an n-point rule.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int n) {
    decltype(f(a)) s{};
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        s += integrate(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

}  // namespace plate::quad
