#pragma once

#include <vector>

#include "classical.hpp"
#include "coherent.hpp"
#include "hamiltonian.hpp"
#include "types.hpp"

namespace sqdyn {

enum class MixedMethod { SmoothedIVR, HermanKluk, Heller };

const char* method_name(MixedMethod method);

// Trajectory symbol each method propagates with: the smoothed symbol for the
// coherent-state IVR, the Weyl symbol for Herman-Kluk and Heller.
SymbolKind method_symbol(MixedMethod method);

// <x|K(t)|z'> evaluated from one real trajectory.
struct MixedPacket {
    MixedMethod method;
    double t = 0.0;
    double q_start = 0.0, p_start = 0.0;
    double q_r = 0.0, p_r = 0.0; // trajectory endpoint
    TangentMatrix m;
    Complex gamma;
    Complex prefactor; // phase-continued, without the pi^{-1/4} b^{-1/2} factor
    double action = 0.0; // S_H
    double iterm = 0.0;  // I_r (zero for Herman-Kluk and Heller)
    XGrid grid;
    std::vector<Complex> amplitude;
    double norm = 0.0; // integral of |amplitude|^2 dx

    Complex amplitude_at(const CoherentParams& cp, double x) const;
    // Complex stationary endpoint momentum p'' at position x (diagnostic):
    // p_r + i (1 - gamma)/(1 + gamma) (c/b) (x - q_r).
    Complex endpoint_momentum(const CoherentParams& cp, double x) const;
};

MixedPacket mixed_packet(const HamiltonianModel& model, MixedMethod method,
                         const PhasePoint& start, double t, const XGrid& grid,
                         const IntegrationTolerance& tol = {});

// Packet parameters without grid evaluation (used by quadrature drivers).
MixedPacket mixed_packet_params(const HamiltonianModel& model, MixedMethod method,
                                const PhasePoint& start, double t,
                                const IntegrationTolerance& tol = {});

struct PhaseSpaceGrid {
    double q_min = 0.0, q_max = 0.0;
    double p_min = 0.0, p_max = 0.0;
    std::size_t nq = 0, np = 0;

    double dq() const { return (q_max - q_min) / double(nq - 1); }
    double dp() const { return (p_max - p_min) / double(np - 1); }
};

// 6-sigma extent around the phase-space centroid of psi, widths those of the
// Husimi density of psi.
PhaseSpaceGrid husimi_support(const std::vector<Complex>& psi, const XGrid& grid,
                              const CoherentParams& cp, std::size_t nq = 61,
                              std::size_t np = 61);

struct PropagateOptions {
    IntegrationTolerance tol{};
    bool verify_convergence = false; // re-run on a doubled grid, 1e-4 L2 gate
    int threads = 1;
};

// psi(x, t) = integral dq' dp' / (2 pi hbar) <x|K(t)|z'> <z'|psi0>.
std::vector<Complex> propagate_state(const HamiltonianModel& model, MixedMethod method,
                                     const std::vector<Complex>& psi0, const XGrid& xgrid,
                                     double t, const PhaseSpaceGrid& psgrid,
                                     const PropagateOptions& opt = {});

enum class CoordinateMode { StationaryPhase, BruteForce };

// <x''|K(t)|x'>: stationary-phase reduced forms, or the brute-force
// phase-space quadrature of <x''|K|z'><z'|x'> d^2z'/pi.
Complex coordinate_propagator(const HamiltonianModel& model, MixedMethod method,
                              double x_from, double x_to, double t, CoordinateMode mode,
                              const IntegrationTolerance& tol = {});

// Phase-space area of initial conditions contributing to the coordinate
// propagator integral; infinity at m_qp = 0.
double sampling_spread(const TangentMatrix& m, MixedMethod method, double hbar);

} // namespace sqdyn
