#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "types.hpp"

namespace sqdyn {

// Composite Simpson over a uniform grid of sampled values. Even sample
// counts fall back to a trapezoid segment at the right end.
template <class T>
T simpson_sampled(const std::vector<T>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return T{};
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    const std::size_t odd = (n % 2 == 1) ? n : n - 1;
    T acc = f[0] + f[odd - 1];
    for (std::size_t i = 1; i + 1 < odd; i += 2) acc += 4.0 * f[i];
    for (std::size_t i = 2; i + 1 < odd; i += 2) acc += 2.0 * f[i];
    T result = acc * (h / 3.0);
    if (odd != n) result += 0.5 * h * (f[n - 2] + f[n - 1]);
    return result;
}

template <class T>
T trapezoid_sampled(const std::vector<T>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return T{};
    T acc = 0.5 * (f[0] + f[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += f[i];
    return acc * h;
}

template <class F>
auto simpson(F&& f, double a, double b, int n) -> decltype(f(a)) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    auto acc = f(a) + f(b);
    for (int i = 1; i < n; i += 2) acc += 4.0 * f(a + i * h);
    for (int i = 2; i < n; i += 2) acc += 2.0 * f(a + i * h);
    return acc * (h / 3.0);
}

namespace detail {
template <class F, class T>
T adaptive_simpson_rec(F& f, double a, double b, T fa, T fm, T fb, T whole,
                       double tol, int depth, int force_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (depth <= 0 || (force_depth <= 0 && std::abs(delta) <= 15.0 * tol))
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                                force_depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                                force_depth - 1);
}
} // namespace detail

template <class F>
auto adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40,
                      int min_depth = 8) -> decltype(f(a)) {
    using T = decltype(f(a));
    const double m = 0.5 * (a + b);
    const T fa = f(a), fm = f(m), fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth,
                                        min_depth);
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

// Gauss-Chebyshev second kind: integral over [-1,1] of f(s) sqrt(1-s^2) ds.
QuadratureRule gauss_chebyshev2(int n);

// Gauss-Chebyshev first kind: integral over [-1,1] of f(s) / sqrt(1-s^2) ds.
QuadratureRule gauss_chebyshev1(int n);

// Composite Gauss-Legendre of a callable over [a, b] with a given panel count.
template <class F>
auto composite_gl(F&& f, double a, double b, int panels, const QuadratureRule& rule)
    -> decltype(f(a)) {
    using T = decltype(f(a));
    T acc{};
    const double h = (b - a) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double lo = a + pnl * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    return acc * (0.5 * h);
}

} // namespace sqdyn
