#include "asymptotics.hpp"

#include <cmath>

#include "errors.hpp"

namespace sqdyn {

SpaResult spa_integrate(double f0, double f1, double f2, double f3, double f4,
                        double g0, double g1, double g2, double hbar) {
    if (!(hbar > 0.0))
        throw Error(errc::invalid_argument, "spa_integrate: hbar must be positive");
    const double scale = std::max({std::abs(f2), std::abs(f3), std::abs(f4), 1.0});
    if (std::abs(f1) > 1e-10 * scale)
        throw Error(errc::invalid_argument, "spa_integrate: x0 is not a stationary point");
    if (std::abs(f2) < 1e-12 * scale)
        throw Error(errc::degenerate_stationary_point,
                    "spa_integrate: vanishing second derivative");

    const double s = (f2 > 0.0) ? 1.0 : -1.0;
    SpaResult res;
    res.a0 = std::sqrt(2.0 * M_PI * hbar / std::abs(f2)) * g0 *
             std::exp(Complex(0.0, 0.25 * M_PI * s + f0 / hbar));
    res.r = (f2 * g2 - f3 * g1) / (2.0 * f2 * f2 * g0) +
            (5.0 * f3 * f3 - 3.0 * f2 * f4) / (24.0 * f2 * f2 * f2);
    res.corrected = res.a0 * (1.0 + I_UNIT * hbar * res.r);
    return res;
}

} // namespace sqdyn
