#pragma once

#include "types.hpp"

namespace sqdyn {

// Stationary-phase evaluation of integral g(x) exp(i f(x)/hbar) dx with the
// first hbar correction: A = A0 [1 + i hbar R + O(hbar^2)].
struct SpaResult {
    Complex a0;        // leading value sqrt(2 pi hbar/|f''|) g e^{i pi s/4 + i f/hbar}
    double r = 0.0;    // correction coefficient R(x0)
    Complex corrected; // a0 (1 + i hbar R)
};

// All derivatives are values at the stationary point x0 (|f'(x0)| must
// already be negligible; pass f1 for the guard check).
SpaResult spa_integrate(double f0, double f1, double f2, double f3, double f4,
                        double g0, double g1, double g2, double hbar);

} // namespace sqdyn
