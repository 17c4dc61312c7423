#pragma once

#include <vector>

#include "classical.hpp"
#include "hamiltonian.hpp"
#include "ivr.hpp"
#include "types.hpp"

namespace sqdyn {

// Each rule pairs a symbol with a sign sigma on the I term:
// S + I with the smoothed symbol, S - I with the antismoothed one, and the
// plain WKB rule S alone with the Weyl symbol.
enum class QuantizationRule { SmoothedPlusI, AntismoothedMinusI, WeylWKB };

const char* rule_name(QuantizationRule rule);
SymbolKind rule_symbol(QuantizationRule rule);
double rule_sigma(QuantizationRule rule);

struct SemiclassicalLevel {
    int m = 0;
    double energy = 0.0;
    double action = 0.0; // reduced action S(E_m)
    double iterm = 0.0;  // I(E_m)
    double period = 0.0;
    double dI_dE = 0.0;
    double dT_dE = 0.0;
};

// Reduced action of the rule's symbol by Gauss-Chebyshev quadrature between
// turning points (the sqrt(1-s^2) weight absorbs the singularity).
double reduced_action(const HamiltonianModel& model, SymbolKind kind, double energy);
double orbit_period(const HamiltonianModel& model, SymbolKind kind, double energy);

struct QuantizeOptions {
    double energy_cap = 1e6;
    double tolerance_scale = 1e-10; // |F| < scale * h at the root
};

std::vector<SemiclassicalLevel> quantize(const HamiltonianModel& model,
                                         QuantizationRule rule, int m_min, int m_max,
                                         const QuantizeOptions& opt = {});

struct HusimiGrid {
    PhaseSpaceGrid grid;
    std::vector<double> density; // row-major (iq * np + ip); NaN at stationary points
    int level = 0;
    QuantizationRule rule = QuantizationRule::SmoothedPlusI;
};

HusimiGrid husimi_semiclassical(const HamiltonianModel& model, QuantizationRule rule,
                                const SemiclassicalLevel& level,
                                const PhaseSpaceGrid& psgrid);

// Density at one phase-space point (NaN where |zdot| < 1e-12).
double husimi_semiclassical_at(const HamiltonianModel& model, QuantizationRule rule,
                               const SemiclassicalLevel& level, const PhasePoint& pt);

struct GreensResult {
    Complex value;
    bool pole_proximity = false; // |1 - e^{i Phi}| < 1e-8
};

GreensResult greens_function(const HamiltonianModel& model, QuantizationRule rule,
                             const PhasePoint& pt, double energy, double gamma);

enum class HoReference { SemiclassicalFull, SemiclassicalExpanded, Exact };

// Closed-form harmonic-oscillator Husimi densities, b = sqrt(hbar/(m w)),
// as functions of |z|^2.
double ho_reference(int m, double z_abs2, HoReference which);

} // namespace sqdyn
