#pragma once

#include <vector>

#include "classical.hpp"
#include "hamiltonian.hpp"
#include "types.hpp"

namespace sqdyn {

// Complex trajectory solving u(0) = z', v(t) = conj(z'') for the analytic
// continuation of the chosen symbol, with the variational pair
// (du, dv)(0) = (0, 1) carried along so that M_vv = dv(t).
struct ComplexTrajectory {
    SymbolKind kind;
    double t = 0.0;
    Complex u_prime, v_prime, u_dprime, v_dprime;
    Complex action; // complex action S(v'', u', t)
    Complex iterm;  // I along the complex path
    Complex m_vv;
    double m_vv_half_arg = 0.0; // continuously tracked arg(M_vv)/2
    double residual = 0.0;      // |v(t) - conj(z'')| after Newton
    int newton_iterations = 0;
    double energy_drift = 0.0; // max |H(u,v) - H(0)| / max(|H(0)|, 1)
    std::vector<double> times;
    std::vector<ComplexPhase> path;
    std::vector<Complex> dv_samples;
};

struct ShootingOptions {
    double tolerance = 1e-10; // on |v(t) - conj(z'')| in scaled units
    int max_newton = 50;
    int max_backtracks = 8;
    IntegrationTolerance ode{};
};

ComplexTrajectory solve_boundary(const HamiltonianModel& model, SymbolKind kind,
                                 const ComplexLabel& zprime, const ComplexLabel& zdprime,
                                 double t, const ShootingOptions& opt = {});

// Newton from each seed; distinct converged roots are returned (distinct by
// v(0) separation > 1e-6). More than one root with |dS| above tolerance is
// the branch-ambiguity situation the caller asked to see.
std::vector<ComplexTrajectory> solve_boundary_roots(
    const HamiltonianModel& model, SymbolKind kind, const ComplexLabel& zprime,
    const ComplexLabel& zdprime, double t, const std::vector<Complex>& seeds,
    const ShootingOptions& opt = {});

// K = M_vv^{-1/2} e^{i sigma I / hbar} exp{(i/hbar) S - (|z'|^2 + |z''|^2)/2}
// with sigma = +1 (Smoothed), -1 (Antismoothed), 0 (Weyl); the square root
// phase is the continuation from 1 at t = 0.
Complex propagator_of(const ComplexTrajectory& traj, const CoherentParams& cp);

// Convenience: solve + assemble; t = 0 returns the overlap directly.
Complex propagator(const HamiltonianModel& model, SymbolKind kind,
                   const ComplexLabel& zprime, const ComplexLabel& zdprime, double t,
                   const ShootingOptions& opt = {});

// |S + I (smoothed flow) - S (weyl flow)| at shared boundary data (z', z'', t)
// taken from the real smoothed-symbol trajectory launched at `start`. The
// smoothed side is then real while the Weyl side is a genuinely complex
// boundary-value solve.
double action_gap_smoothed_weyl(const HamiltonianModel& model, const PhasePoint& start,
                                double t);

} // namespace sqdyn
