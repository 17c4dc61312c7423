#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace sqdyn {

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double initial_step = 0.0; // 0 -> heuristic
    std::size_t max_steps = 2'000'000;
    bool store_samples = true;
};

template <std::size_t N>
struct OdeSolution {
    std::vector<double> times;
    std::vector<std::array<double, N>> states;

    double final_time() const { return times.back(); }
    const std::array<double, N>& final_state() const { return states.back(); }
};

// Embedded Dormand-Prince 5(4) pair. The trajectory and its tangent matrix
// are integrated as one augmented state so both see the same step sequence.
template <std::size_t N, class F>
OdeSolution<N> integrate_dopri5(F&& deriv, std::array<double, N> y0, double t0,
                                double t1, const OdeOptions& opt = {}) {
    using State = std::array<double, N>;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    OdeSolution<N> sol;
    double t = t0;
    State y = y0;
    if (opt.store_samples) {
        sol.times.push_back(t);
        sol.states.push_back(y);
    }
    const double span = t1 - t0;
    if (span == 0.0) {
        if (!opt.store_samples) {
            sol.times.push_back(t);
            sol.states.push_back(y);
        }
        return sol;
    }
    const double dir = (span > 0.0) ? 1.0 : -1.0;

    State k1 = deriv(t, y);
    double h = opt.initial_step;
    if (h == 0.0) {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = (fnorm > 0.0) ? 0.01 * (opt.abs_tol + opt.rel_tol * ynorm + 1e-6) / fnorm
                          : 1e-4 * std::abs(span);
        h = std::min(h, 1e-2 * std::abs(span));
        h = std::max(h, 1e-12 * std::abs(span));
    }
    h *= dir;

    std::size_t steps = 0;
    bool last = false;
    while (true) {
        if (++steps > opt.max_steps)
            throw Error(errc::step_failure, "integrate_dopri5: step budget exhausted");
        if (std::abs(h) < 1e-15 * (std::abs(t) + std::abs(span)))
            throw Error(errc::step_failure, "integrate_dopri5: step size underflow");
        if (dir * (t + h - t1) >= 0.0) {
            h = t1 - t;
            last = true;
        }

        State y2, y3, y4, y5, y6, y7;
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
        State k2 = deriv(t + c2 * h, y2);
        for (std::size_t i = 0; i < N; ++i)
            y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = deriv(t + c3 * h, y3);
        for (std::size_t i = 0; i < N; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = deriv(t + c4 * h, y4);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = deriv(t + c5 * h, y5);
        for (std::size_t i = 0; i < N; ++i)
            y6[i] = y[i] +
                    h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i]);
        State k6 = deriv(t + h, y6);
        for (std::size_t i = 0; i < N; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        State k7 = deriv(t + h, y7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y7[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t += h;
            y = y7;
            k1 = k7; // FSAL
            for (std::size_t i = 0; i < N; ++i)
                if (!std::isfinite(y[i]))
                    throw Error(errc::nonfinite_state,
                                "integrate_dopri5: non-finite state");
            if (opt.store_samples) {
                sol.times.push_back(t);
                sol.states.push_back(y);
            }
            if (last) break;
        } else {
            last = false;
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
    }
    if (!opt.store_samples) {
        sol.times.push_back(t);
        sol.states.push_back(y);
    }
    return sol;
}

} // namespace sqdyn
