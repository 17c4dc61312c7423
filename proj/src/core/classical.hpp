#pragma once

#include <utility>
#include <vector>

#include "hamiltonian.hpp"
#include "types.hpp"

namespace sqdyn {

// Tangent matrix in the scaled variables (q/b, p/c); symplectic, det = 1.
struct TangentMatrix {
    double m_qq = 1.0;
    double m_qp = 0.0;
    double m_pq = 0.0;
    double m_pp = 1.0;

    double det() const { return m_qq * m_pp - m_qp * m_pq; }

    Complex M_uu() const { return 0.5 * Complex(m_qq + m_pp, m_pq - m_qp); }
    Complex M_uv() const { return 0.5 * Complex(m_qq - m_pp, m_pq + m_qp); }
    Complex M_vu() const { return 0.5 * Complex(m_qq - m_pp, -m_pq - m_qp); }
    Complex M_vv() const { return 0.5 * Complex(m_qq + m_pp, m_qp - m_pq); }
};

// gamma = M_uv / M_vv; throws degenerate when |M_vv| < 1e-14.
Complex gamma_of(const TangentMatrix& m);

struct TrajectorySample {
    double t;
    double q;
    double p;
    TangentMatrix m;
    double action; // S_H = int (p dq - H dt)
    double iterm;  // I = int (b^2/4 H_qq + c^2/4 H_pp) dt
};

struct RealTrajectory {
    SymbolKind kind;
    std::vector<TrajectorySample> samples;
    double energy = 0.0;       // symbol value at t = 0
    double energy_drift = 0.0; // max |H(t) - H(0)| / max(|H(0)|, 1)

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }

    // Continuous argument of (m_qq + i m_qp) along the trajectory, halved;
    // starts at 0 where the matrix is the identity.
    std::vector<double> half_arg_spread() const;
    // Continuous argument of the Herman-Kluk radicand
    // (m_pp + m_qq - i m_qp + i m_pq)/2, halved.
    std::vector<double> half_arg_hk() const;
};

struct IntegrationTolerance {
    double rel = 1e-12;
    double abs = 1e-13;
};

RealTrajectory integrate_real(const HamiltonianModel& model, SymbolKind kind,
                              const PhasePoint& start, double t,
                              const IntegrationTolerance& tol = {});

// (du/dt, dv/dt) at a real phase point for the chosen symbol.
std::pair<Complex, Complex> phase_velocity(const HamiltonianModel& model, SymbolKind kind,
                                           const PhasePoint& pt);

struct PeriodicOrbit {
    SymbolKind kind;
    double energy = 0.0;
    double period = 0.0;
    double reduced_action = 0.0; // contour integral of p dq over one period
    double iterm = 0.0;          // I over one period
    double dT_dE = 0.0;
    double dI_dE = 0.0;
    double q_minus = 0.0;
    double q_plus = 0.0;
    std::vector<TrajectorySample> samples; // one full period from (q_minus, 0)
    double closure = 0.0;                  // |z(T) - z(0)| in scaled units

    PhasePoint at_fraction(double f) const; // orbit point at time f*T
};

double potential_minimum(const HamiltonianModel& model, SymbolKind kind);

// Turning points of the symbol at the given energy: H(q, 0) = energy on both
// sides of the potential minimum.
std::pair<double, double> turning_points(const HamiltonianModel& model, SymbolKind kind,
                                         double energy);

PeriodicOrbit find_periodic_orbit(const HamiltonianModel& model, SymbolKind kind,
                                  double energy, bool with_derivatives = true,
                                  const IntegrationTolerance& tol = {});

// (M^n)_vv = 1 - n i hbar (dT/dE) du/dt dv/dt.
Complex monodromy_vv(const PeriodicOrbit& orbit, int n, Complex udot, Complex vdot,
                     double hbar);

} // namespace sqdyn
