#include "coherent.hpp"

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"

namespace sqdyn {

Complex coherent_wavefunction(const PhasePoint& pt, const CoherentParams& cp, double x) {
    const double pref = std::pow(M_PI, -0.25) / std::sqrt(cp.b);
    const double dx = x - pt.q;
    const Complex expo = -dx * dx / (2.0 * cp.b * cp.b) +
                         I_UNIT / cp.hbar * pt.p * (x - 0.5 * pt.q);
    return pref * std::exp(expo);
}

Complex coherent_wavefunction_label(const ComplexLabel& z, const CoherentParams& cp, double x) {
    const double pref = std::pow(M_PI, -0.25) / std::sqrt(cp.b);
    const Complex a = x / cp.b - std::sqrt(2.0) * z.z;
    const Complex expo = -0.5 * a * a + 0.5 * z.z * (z.z - std::conj(z.z));
    return pref * std::exp(expo);
}

Complex overlap(const ComplexLabel& z1, const ComplexLabel& z2) {
    return std::exp(-0.5 * std::norm(z1.z) + std::conj(z1.z) * z2.z - 0.5 * std::norm(z2.z));
}

Complex bargmann_transform(const std::vector<Complex>& psi, const XGrid& grid,
                           const PhasePoint& pt, const CoherentParams& cp) {
    if (psi.size() != grid.count || grid.count < 8)
        throw Error(errc::invalid_argument, "bargmann_transform: grid/sample mismatch");
    std::vector<Complex> integrand(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        integrand[i] = std::conj(coherent_wavefunction(pt, cp, grid.at(i))) * psi[i];
    const double h = grid.spacing();
    const Complex s = simpson_sampled(integrand, h);
    const Complex t = trapezoid_sampled(integrand, h);
    const double scale = std::max(std::abs(s), 1e-30);
    if (std::abs(s - t) > 1e-6 * std::max(scale, 1.0))
        throw Error(errc::grid_too_coarse,
                    "bargmann_transform: quadrature estimates disagree beyond 1e-6");
    return s;
}

XGrid auto_grid(double q_center, double b, std::size_t count, double extra_span) {
    const double half = 8.0 * b + extra_span;
    return XGrid{q_center - half, q_center + half, count};
}

double norm_squared(const std::vector<Complex>& psi, const XGrid& grid) {
    std::vector<double> dens(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) dens[i] = std::norm(psi[i]);
    return simpson_sampled(dens, grid.spacing());
}

} // namespace sqdyn
