#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "errors.hpp"

namespace sqdyn {

// Bisection on a sign-changing bracket [a, b].
template <class F>
double bisect(F&& f, double a, double b, double xtol = 1e-14, int maxit = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw Error(errc::no_bracket, "bisect: endpoints do not bracket a root");
    for (int it = 0; it < maxit; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0 || 0.5 * (b - a) < xtol * (1.0 + std::abs(m))) return m;
        if (fa * fm < 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

// Newton refinement guarded by a bracket; falls back to bisection steps
// whenever the Newton update leaves the bracket or fails to descend.
template <class F, class DF>
double newton_bracketed(F&& f, DF&& df, double a, double b, double ftol,
                        int maxit = 100) {
    double fa = f(a), fb = f(b);
    if (fa * fb > 0.0)
        throw Error(errc::no_bracket, "newton_bracketed: invalid bracket");
    double x = 0.5 * (a + b);
    double fx = f(x);
    for (int it = 0; it < maxit; ++it) {
        if (std::abs(fx) <= ftol) return x;
        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : 0.5 * (a + b);
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        const double fn = f(xn);
        if (fa * fn <= 0.0) {
            b = xn;
            fb = fn;
        } else {
            a = xn;
            fa = fn;
        }
        x = xn;
        fx = fn;
    }
    return x;
}

} // namespace sqdyn
