#pragma once

#include <vector>

#include "types.hpp"

namespace sqdyn {

// Position-representation wavefunction of the coherent state labeled by
// (q, p): pi^{-1/4} b^{-1/2} exp[-(x-q)^2 / 2b^2 + (i/hbar) p (x - q/2)].
Complex coherent_wavefunction(const PhasePoint& pt, const CoherentParams& cp, double x);

// Same wavefunction written in terms of the complex label,
// pi^{-1/4} b^{-1/2} exp[-(x/b - sqrt(2) z)^2 / 2 + z (z - z*) / 2].
Complex coherent_wavefunction_label(const ComplexLabel& z, const CoherentParams& cp, double x);

// <z1|z2> = exp{-|z1|^2/2 + conj(z1) z2 - |z2|^2/2}
Complex overlap(const ComplexLabel& z1, const ComplexLabel& z2);

struct XGrid {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    double spacing() const { return (max - min) / double(count - 1); }
    double at(std::size_t i) const { return min + double(i) * spacing(); }
    std::vector<double> points() const {
        std::vector<double> xs(count);
        for (std::size_t i = 0; i < count; ++i) xs[i] = at(i);
        return xs;
    }
};

// <z|psi> by quadrature of conj(<x|z>) psi(x) over the sampled grid.
// Throws grid_too_coarse when trapezoid and Simpson estimates disagree by
// more than 1e-6 relative.
Complex bargmann_transform(const std::vector<Complex>& psi, const XGrid& grid,
                           const PhasePoint& pt, const CoherentParams& cp);

// Grid wide enough for a packet centered at q: center +/- 8b plus momentum drift span.
XGrid auto_grid(double q_center, double b, std::size_t count = 1024, double extra_span = 0.0);

double norm_squared(const std::vector<Complex>& psi, const XGrid& grid);

} // namespace sqdyn
