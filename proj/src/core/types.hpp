#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace sqdyn {

using Complex = std::complex<double>;

inline constexpr Complex I_UNIT{0.0, 1.0};

// Width scales of the coherent-state family. b carries length units,
// c momentum units, and b*c = hbar exactly.
struct CoherentParams {
    double b;
    double c;
    double hbar;

    static CoherentParams from_b(double b, double hbar) {
        if (!(b > 0.0) || !(hbar > 0.0))
            throw Error(errc::invalid_argument, "CoherentParams: b and hbar must be positive");
        return CoherentParams{b, hbar / b, hbar};
    }

    bool valid() const {
        return b > 0.0 && c > 0.0 && hbar > 0.0 &&
               std::abs(b * c - hbar) <= 1e-14 * hbar;
    }
};

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

// z = (q/b + i p/c)/sqrt(2)
struct ComplexLabel {
    Complex z;

    double x() const { return z.real(); }
    double y() const { return z.imag(); }
};

// Complexified phase-space pair; for a real phase point v = conj(u).
struct ComplexPhase {
    Complex u;
    Complex v;

    Complex q(const CoherentParams& cp) const { return cp.b / std::sqrt(2.0) * (u + v); }
    Complex p(const CoherentParams& cp) const { return -I_UNIT * cp.c / std::sqrt(2.0) * (u - v); }
};

inline ComplexLabel label_of(const PhasePoint& pt, const CoherentParams& cp) {
    return ComplexLabel{Complex(pt.q / cp.b, pt.p / cp.c) / std::sqrt(2.0)};
}

inline PhasePoint point_of(const ComplexLabel& z, const CoherentParams& cp) {
    return PhasePoint{std::sqrt(2.0) * cp.b * z.x(), std::sqrt(2.0) * cp.c * z.y()};
}

inline ComplexPhase phase_of(const PhasePoint& pt, const CoherentParams& cp) {
    const Complex u = label_of(pt, cp).z;
    return ComplexPhase{u, std::conj(u)};
}

} // namespace sqdyn
