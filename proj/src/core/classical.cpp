#include "classical.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "integrator.hpp"
#include "phase.hpp"

namespace sqdyn {

Complex gamma_of(const TangentMatrix& m) {
    const Complex num(m.m_qq - m.m_pp, m.m_qp + m.m_pq);
    const Complex den(m.m_qq + m.m_pp, m.m_qp - m.m_pq);
    if (std::abs(den) < 1e-14)
        throw Error(errc::degenerate, "gamma_of: vanishing M_vv, corrupted tangent matrix");
    return num / den;
}

namespace {

// Augmented state: q, p, m_qq, m_qp, m_pq, m_pp, S_H, I
using RState = std::array<double, 8>;

struct RealDeriv {
    const HamiltonianModel* model;
    SymbolKind kind;

    RState operator()(double, const RState& y) const {
        const auto d = model->eval(kind, Complex(y[0]), Complex(y[1]));
        const double hq = d.h_q.real(), hp = d.h_p.real();
        const double hqq = d.h_qq.real(), hpp = d.h_pp.real(), hqp = d.h_qp.real();
        const double h = d.h.real();
        const CoherentParams& cp = model->params();
        const double boc = cp.b / cp.c, cob = cp.c / cp.b;
        RState dy;
        dy[0] = hp;
        dy[1] = -hq;
        dy[2] = hqp * y[2] + cob * hpp * y[4];
        dy[3] = hqp * y[3] + cob * hpp * y[5];
        dy[4] = -boc * hqq * y[2] - hqp * y[4];
        dy[5] = -boc * hqq * y[3] - hqp * y[5];
        dy[6] = y[1] * hp - h;
        dy[7] = 0.25 * cp.b * cp.b * hqq + 0.25 * cp.c * cp.c * hpp;
        return dy;
    }
};

TrajectorySample to_sample(double t, const RState& y) {
    return TrajectorySample{t, y[0], y[1], TangentMatrix{y[2], y[3], y[4], y[5]}, y[6], y[7]};
}

} // namespace

std::vector<double> RealTrajectory::half_arg_spread() const {
    std::vector<Complex> seq;
    seq.reserve(samples.size());
    for (const auto& s : samples) seq.emplace_back(s.m.m_qq, s.m.m_qp);
    return phase_continue(seq);
}

std::vector<double> RealTrajectory::half_arg_hk() const {
    std::vector<Complex> seq;
    seq.reserve(samples.size());
    for (const auto& s : samples)
        seq.push_back(0.5 * Complex(s.m.m_pp + s.m.m_qq, s.m.m_pq - s.m.m_qp));
    return phase_continue(seq);
}

RealTrajectory integrate_real(const HamiltonianModel& model, SymbolKind kind,
                              const PhasePoint& start, double t,
                              const IntegrationTolerance& tol) {
    if (t < 0.0) throw Error(errc::invalid_argument, "integrate_real: t must be >= 0");
    RState y0{start.q, start.p, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    OdeOptions opt;
    opt.rel_tol = tol.rel;
    opt.abs_tol = tol.abs;
    const auto sol = integrate_dopri5(RealDeriv{&model, kind}, y0, 0.0, t, opt);

    RealTrajectory traj;
    traj.kind = kind;
    traj.samples.reserve(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        traj.samples.push_back(to_sample(sol.times[i], sol.states[i]));

    const double h0 =
        model.eval(kind, Complex(start.q), Complex(start.p)).h.real();
    traj.energy = h0;
    double drift = 0.0;
    const double scale = std::max(std::abs(h0), 1.0);
    for (const auto& s : traj.samples) {
        const double h = model.eval(kind, Complex(s.q), Complex(s.p)).h.real();
        drift = std::max(drift, std::abs(h - h0) / scale);
    }
    traj.energy_drift = drift;
    return traj;
}

std::pair<Complex, Complex> phase_velocity(const HamiltonianModel& model, SymbolKind kind,
                                           const PhasePoint& pt) {
    const auto d = model.eval(kind, Complex(pt.q), Complex(pt.p));
    const double qdot = d.h_p.real();
    const double pdot = -d.h_q.real();
    const CoherentParams& cp = model.params();
    const Complex udot = Complex(qdot / cp.b, pdot / cp.c) / std::sqrt(2.0);
    const Complex vdot = Complex(qdot / cp.b, -pdot / cp.c) / std::sqrt(2.0);
    return {udot, vdot};
}

// Stationary point of the symbol's potential nearest the origin; for an
// antismoothed double well this is the central hump, which the orbit
// machinery treats as the scan floor (orbits below it are out of scope).
double potential_minimum(const HamiltonianModel& model, SymbolKind kind) {
    auto dv = [&](double q) { return model.potential_derivative(kind, q); };
    double a = 0.0, b = 0.0;
    if (dv(0.0) == 0.0) return 0.0;
    const double dir = (dv(0.0) < 0.0) ? 1.0 : -1.0; // downhill direction
    double step = 0.125;
    a = 0.0;
    for (int it = 0; it < 64; ++it) {
        b = a + dir * step;
        if (dv(0.0) * dv(b) < 0.0) break;
        step *= 2.0;
        if (step > 1e8)
            throw Error(errc::below_minimum, "potential_minimum: no stationary point found");
    }
    const double lo = std::min(0.0, b), hi = std::max(0.0, b);
    double x1 = lo, x2 = hi;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (x1 + x2);
        if (dv(x1) * dv(m) <= 0.0)
            x2 = m;
        else
            x1 = m;
        if (x2 - x1 < 1e-14 * (1.0 + std::abs(m))) break;
    }
    return 0.5 * (x1 + x2);
}

namespace {

struct TurningPoints {
    double q_minus;
    double q_plus;
};

} // namespace

std::pair<double, double> turning_points(const HamiltonianModel& model, SymbolKind kind,
                                         double energy) {
    const double q_min = potential_minimum(model, kind);
    const double shift = model.kinetic_shift(kind);
    auto f = [&](double q) { return model.potential(kind, q) + shift - energy; };
    if (f(q_min) >= 0.0)
        throw Error(errc::below_minimum,
                    "turning_points: energy at or below the potential minimum");
    constexpr double kQMax = 1e6;
    auto expand = [&](double dir) {
        double step = std::max(0.125, 1e-3 * std::abs(q_min));
        double prev = q_min;
        for (int it = 0; it < 200; ++it) {
            const double trial = q_min + dir * step;
            if (f(trial) > 0.0) {
                double a = std::min(prev, trial), b = std::max(prev, trial);
                double fa = f(a);
                for (int k = 0; k < 200; ++k) {
                    const double m = 0.5 * (a + b);
                    const double fm = f(m);
                    if (fa * fm <= 0.0)
                        b = m;
                    else {
                        a = m;
                        fa = fm;
                    }
                    if (b - a < 1e-13 * (1.0 + std::abs(m))) break;
                }
                return 0.5 * (a + b);
            }
            prev = trial;
            step *= 2.0;
            if (std::abs(trial) > kQMax) break;
        }
        throw Error(errc::unbound, "turning_points: no turning point below q_max");
    };
    return {expand(-1.0), expand(+1.0)};
}

namespace {

struct HalfPeriod {
    double t_half;
    RState state; // at the half period
};

// Integrate from (q_minus, 0) until p returns to zero at the right turning
// point; locate the crossing by Newton re-integration from the bracketing
// sample.
HalfPeriod integrate_half_period(const HamiltonianModel& model, SymbolKind kind,
                                 double q_minus, const IntegrationTolerance& tol) {
    RState y0{q_minus, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    RealDeriv deriv{&model, kind};
    OdeOptions opt;
    opt.rel_tol = tol.rel;
    opt.abs_tol = tol.abs;

    // crude time scale from the local curvature at the turning point
    const double vpp = std::abs(model.eval(kind, Complex(q_minus), Complex(0.0)).h_qq.real());
    double chunk = 2.0 * M_PI * std::sqrt(model.mass() / std::max(vpp, 1e-12));
    chunk = std::clamp(chunk, 1e-3, 1e4);

    double t0 = 0.0;
    RState y = y0;
    for (int rep = 0; rep < 64; ++rep) {
        const auto sol = integrate_dopri5(deriv, y, t0, t0 + chunk, opt);
        for (std::size_t i = 1; i < sol.times.size(); ++i) {
            const bool launched = sol.states[i - 1][1] > 0.0;
            if (launched && sol.states[i][1] <= 0.0) {
                // Newton on the crossing time from the left bracket state
                double tau = sol.times[i - 1];
                RState base = sol.states[i - 1];
                double dt_guess = (sol.times[i] - sol.times[i - 1]) *
                                  base[1] / (base[1] - sol.states[i][1]);
                for (int it = 0; it < 60; ++it) {
                    OdeOptions fine = opt;
                    fine.store_samples = false;
                    const auto probe =
                        integrate_dopri5(deriv, base, 0.0, dt_guess, fine);
                    const RState& s = probe.final_state();
                    const double pv = s[1];
                    const double pdot = -model.eval(kind, Complex(s[0]), Complex(s[1]))
                                             .h_q.real();
                    const double step = pv / pdot;
                    dt_guess -= step;
                    if (std::abs(step) < 1e-15 * (1.0 + std::abs(tau + dt_guess))) break;
                }
                OdeOptions fine = opt;
                fine.store_samples = false;
                const auto last = integrate_dopri5(deriv, base, 0.0, dt_guess, fine);
                return HalfPeriod{tau + dt_guess, last.final_state()};
            }
        }
        t0 = sol.final_time();
        y = sol.final_state();
    }
    throw Error(errc::no_convergence, "find_periodic_orbit: half period not located");
}

PeriodicOrbit solve_orbit_core(const HamiltonianModel& model, SymbolKind kind,
                               double energy, const IntegrationTolerance& tol) {
    TurningPoints tp{};
    {
        const auto pts = turning_points(model, kind, energy);
        tp.q_minus = pts.first;
        tp.q_plus = pts.second;
    }
    const auto half = integrate_half_period(model, kind, tp.q_minus, tol);

    PeriodicOrbit orbit;
    orbit.kind = kind;
    orbit.energy = energy;
    orbit.q_minus = tp.q_minus;
    orbit.q_plus = tp.q_plus;
    orbit.period = 2.0 * half.t_half;
    // S_H accumulates p dq - H dt; add back the energy term for the contour integral
    orbit.reduced_action = 2.0 * (half.state[6] + energy * half.t_half);
    orbit.iterm = 2.0 * half.state[7];

    // full revolution for samples and the closure check
    RState y0{tp.q_minus, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    OdeOptions opt;
    opt.rel_tol = tol.rel;
    opt.abs_tol = tol.abs;
    const auto sol = integrate_dopri5(RealDeriv{&model, kind}, y0, 0.0, orbit.period, opt);
    orbit.samples.reserve(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        orbit.samples.push_back(to_sample(sol.times[i], sol.states[i]));
    const auto& fin = sol.final_state();
    const CoherentParams& cp = model.params();
    orbit.closure = std::hypot((fin[0] - tp.q_minus) / cp.b, fin[1] / cp.c) / std::sqrt(2.0);
    return orbit;
}

} // namespace

PhasePoint PeriodicOrbit::at_fraction(double f) const {
    const double t = f * period;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double tv) { return s.t < tv; });
    if (it == samples.end()) return PhasePoint{samples.back().q, samples.back().p};
    if (it == samples.begin()) return PhasePoint{samples.front().q, samples.front().p};
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return PhasePoint{lo.q + w * (hi.q - lo.q), lo.p + w * (hi.p - lo.p)};
}

PeriodicOrbit find_periodic_orbit(const HamiltonianModel& model, SymbolKind kind,
                                  double energy, bool with_derivatives,
                                  const IntegrationTolerance& tol) {
    PeriodicOrbit orbit = solve_orbit_core(model, kind, energy, tol);
    if (with_derivatives) {
        const double q_min = potential_minimum(model, kind);
        const double e_min = model.potential(kind, q_min) + model.kinetic_shift(kind);
        double de = 1e-4 * std::max(std::abs(energy), std::abs(energy - e_min));
        de = std::min(de, 0.45 * (energy - e_min));
        const auto lo = solve_orbit_core(model, kind, energy - de, tol);
        const auto hi = solve_orbit_core(model, kind, energy + de, tol);
        orbit.dT_dE = (hi.period - lo.period) / (2.0 * de);
        orbit.dI_dE = (hi.iterm - lo.iterm) / (2.0 * de);
        const double plus_T = (hi.period - orbit.period) / de;
        const double minus_T = (orbit.period - lo.period) / de;
        const double spread = std::abs(plus_T - minus_T);
        if (spread > 1e-3 * std::max(std::abs(orbit.dT_dE), 1e-30)) {
            // Richardson: combine the h and h/2 central estimates
            const auto lo2 = solve_orbit_core(model, kind, energy - 0.5 * de, tol);
            const auto hi2 = solve_orbit_core(model, kind, energy + 0.5 * de, tol);
            const double d_h = orbit.dT_dE;
            const double d_h2 = (hi2.period - lo2.period) / de;
            orbit.dT_dE = (4.0 * d_h2 - d_h) / 3.0;
            const double i_h = orbit.dI_dE;
            const double i_h2 = (hi2.iterm - lo2.iterm) / de;
            orbit.dI_dE = (4.0 * i_h2 - i_h) / 3.0;
        }
    }
    return orbit;
}

Complex monodromy_vv(const PeriodicOrbit& orbit, int n, Complex udot, Complex vdot,
                     double hbar) {
    return 1.0 - double(n) * I_UNIT * hbar * orbit.dT_dE * udot * vdot;
}

} // namespace sqdyn
