#include "complextraj.hpp"

#include <cmath>

#include "coherent.hpp"
#include "errors.hpp"
#include "integrator.hpp"
#include "phase.hpp"

namespace sqdyn {

namespace {

// u, v, du, dv, S-accumulator, I-accumulator as interleaved (re, im)
using CState = std::array<double, 12>;

Complex get(const CState& y, int slot) { return Complex(y[2 * slot], y[2 * slot + 1]); }
void put(CState& y, int slot, Complex c) {
    y[2 * slot] = c.real();
    y[2 * slot + 1] = c.imag();
}

struct ComplexDeriv {
    const HamiltonianModel* model;
    SymbolKind kind;

    CState operator()(double, const CState& y) const {
        const CoherentParams& cp = model->params();
        const Complex u = get(y, 0), v = get(y, 1), du = get(y, 2), dv = get(y, 3);
        const double rt2 = std::sqrt(2.0);
        const Complex q = cp.b / rt2 * (u + v);
        const Complex p = -I_UNIT * cp.c / rt2 * (u - v);
        const auto d = model->eval(kind, q, p);

        const Complex h_u = (cp.b * d.h_q - I_UNIT * cp.c * d.h_p) / rt2;
        const Complex h_v = (cp.b * d.h_q + I_UNIT * cp.c * d.h_p) / rt2;
        const Complex h_uu =
            0.5 * (cp.b * cp.b * d.h_qq - 2.0 * I_UNIT * cp.b * cp.c * d.h_qp -
                   cp.c * cp.c * d.h_pp);
        const Complex h_vv =
            0.5 * (cp.b * cp.b * d.h_qq + 2.0 * I_UNIT * cp.b * cp.c * d.h_qp -
                   cp.c * cp.c * d.h_pp);
        const Complex h_uv = 0.5 * (cp.b * cp.b * d.h_qq + cp.c * cp.c * d.h_pp);

        const Complex i_over_h = I_UNIT / cp.hbar;
        const Complex udot = -i_over_h * h_v;
        const Complex vdot = i_over_h * h_u;
        const Complex dudot = -i_over_h * (h_uv * du + h_vv * dv);
        const Complex dvdot = i_over_h * (h_uu * du + h_uv * dv);
        const Complex sdot = 0.5 * I_UNIT * cp.hbar * (udot * v - vdot * u) - d.h;
        const Complex idot = 0.5 * h_uv;

        CState dy;
        put(dy, 0, udot);
        put(dy, 1, vdot);
        put(dy, 2, dudot);
        put(dy, 3, dvdot);
        put(dy, 4, sdot);
        put(dy, 5, idot);
        return dy;
    }
};

struct ShotResult {
    Complex v_end;  // v(t)
    Complex dv_end; // dv(t), the shooting Jacobian and M_vv
    OdeSolution<12> sol;
};

ShotResult shoot(const HamiltonianModel& model, SymbolKind kind, Complex u0, Complex v0,
                 double t, const IntegrationTolerance& tol, bool store) {
    CState y0{};
    put(y0, 0, u0);
    put(y0, 1, v0);
    put(y0, 2, Complex(0.0));
    put(y0, 3, Complex(1.0));
    put(y0, 4, Complex(0.0));
    put(y0, 5, Complex(0.0));
    OdeOptions opt;
    opt.rel_tol = tol.rel;
    opt.abs_tol = tol.abs;
    opt.store_samples = store;
    auto sol = integrate_dopri5(ComplexDeriv{&model, kind}, y0, 0.0, t, opt);
    const CState& yf = sol.final_state();
    return ShotResult{get(yf, 1), get(yf, 3), std::move(sol)};
}

// Newton iteration on v(0); returns the converged v0 or throws.
Complex newton_v0(const HamiltonianModel& model, SymbolKind kind, Complex u0,
                  Complex target, double t, Complex seed, const ShootingOptions& opt) {
    Complex v0 = seed;
    auto res = shoot(model, kind, u0, v0, t, opt.ode, false);
    double rmag = std::abs(res.v_end - target);
    for (int it = 0; it < opt.max_newton; ++it) {
        if (rmag <= opt.tolerance) return v0;
        if (std::abs(res.dv_end) < 1e-14)
            throw Error(errc::degenerate, "solve_boundary: vanishing shooting Jacobian");
        const Complex full_step = -(res.v_end - target) / res.dv_end;
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
            const Complex trial = v0 + lambda * full_step;
            auto tres = shoot(model, kind, u0, trial, t, opt.ode, false);
            const double tr = std::abs(tres.v_end - target);
            if (tr < rmag || tr <= opt.tolerance) {
                v0 = trial;
                res = std::move(tres);
                rmag = tr;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw Error(errc::no_convergence,
                        "solve_boundary: Newton stalled after backtracking");
    }
    if (rmag <= opt.tolerance) return v0;
    throw Error(errc::no_convergence, "solve_boundary: Newton iteration cap reached");
}

ComplexTrajectory assemble(const HamiltonianModel& model, SymbolKind kind, Complex u0,
                           Complex v0, double t, const ShootingOptions& opt,
                           Complex target, int iterations) {
    auto res = shoot(model, kind, u0, v0, t, opt.ode, true);
    ComplexTrajectory traj;
    traj.kind = kind;
    traj.t = t;
    traj.u_prime = u0;
    traj.v_prime = v0;
    const CState& yf = res.sol.final_state();
    traj.u_dprime = get(yf, 0);
    traj.v_dprime = get(yf, 1);
    traj.m_vv = get(yf, 3);
    traj.residual = std::abs(get(yf, 1) - target);
    traj.newton_iterations = iterations;

    const CoherentParams& cp = model.params();
    // S = accumulated integral - (i hbar / 2)(u'' v'' + u' v')
    traj.action = get(yf, 4) -
                  0.5 * I_UNIT * cp.hbar *
                      (traj.u_dprime * traj.v_dprime + traj.u_prime * traj.v_prime);
    traj.iterm = get(yf, 5);

    traj.times = res.sol.times;
    traj.path.reserve(res.sol.states.size());
    traj.dv_samples.reserve(res.sol.states.size());
    Complex h0;
    double drift = 0.0;
    for (std::size_t i = 0; i < res.sol.states.size(); ++i) {
        const Complex u = get(res.sol.states[i], 0), v = get(res.sol.states[i], 1);
        traj.path.push_back(ComplexPhase{u, v});
        traj.dv_samples.push_back(get(res.sol.states[i], 3));
        const Complex q = cp.b / std::sqrt(2.0) * (u + v);
        const Complex p = -I_UNIT * cp.c / std::sqrt(2.0) * (u - v);
        const Complex h = model.eval(kind, q, p).h;
        if (i == 0)
            h0 = h;
        else
            drift = std::max(drift, std::abs(h - h0) / std::max(std::abs(h0), 1.0));
    }
    traj.energy_drift = drift;
    traj.m_vv_half_arg = phase_continue(traj.dv_samples).back();
    return traj;
}

} // namespace

ComplexTrajectory solve_boundary(const HamiltonianModel& model, SymbolKind kind,
                                 const ComplexLabel& zprime, const ComplexLabel& zdprime,
                                 double t, const ShootingOptions& opt) {
    if (!(t > 0.0))
        throw Error(errc::invalid_argument, "solve_boundary: t must be positive");
    const Complex u0 = zprime.z;
    const Complex target = std::conj(zdprime.z);
    int iterations = 0;
    Complex v0;
    try {
        v0 = newton_v0(model, kind, u0, target, t, std::conj(zprime.z), opt);
    } catch (const Error&) {
        // homotopy in t from a short time where the overlap limit dominates
        bool ok = false;
        for (int nsteps = 4; nsteps <= 64 && !ok; nsteps *= 2) {
            Complex seed = target;
            try {
                for (int k = 1; k <= nsteps; ++k) {
                    const double tk = t * double(k) / double(nsteps);
                    seed = newton_v0(model, kind, u0, target, tk, seed, opt);
                    ++iterations;
                }
                v0 = seed;
                ok = true;
            } catch (const Error&) {
            }
        }
        if (!ok)
            throw Error(errc::no_convergence,
                        "solve_boundary: Newton failed including t-homotopy");
    }
    return assemble(model, kind, u0, v0, t, opt, target, iterations);
}

std::vector<ComplexTrajectory> solve_boundary_roots(
    const HamiltonianModel& model, SymbolKind kind, const ComplexLabel& zprime,
    const ComplexLabel& zdprime, double t, const std::vector<Complex>& seeds,
    const ShootingOptions& opt) {
    std::vector<ComplexTrajectory> roots;
    const Complex u0 = zprime.z;
    const Complex target = std::conj(zdprime.z);
    for (const Complex& seed : seeds) {
        try {
            const Complex v0 = newton_v0(model, kind, u0, target, t, seed, opt);
            bool known = false;
            for (const auto& r : roots)
                if (std::abs(r.v_prime - v0) < 1e-6) known = true;
            if (!known) roots.push_back(assemble(model, kind, u0, v0, t, opt, target, 0));
        } catch (const Error&) {
        }
    }
    return roots;
}

Complex propagator_of(const ComplexTrajectory& traj, const CoherentParams& cp) {
    double sigma = 0.0;
    if (traj.kind == SymbolKind::Smoothed) sigma = 1.0;
    if (traj.kind == SymbolKind::Antismoothed) sigma = -1.0;

    const Complex prefactor =
        std::exp(Complex(0.0, -traj.m_vv_half_arg)) / std::sqrt(std::abs(traj.m_vv));
    const Complex z1 = traj.u_prime;           // z'
    const Complex z2 = std::conj(traj.v_dprime); // z''
    const Complex expo = I_UNIT / cp.hbar * (traj.action + sigma * traj.iterm) -
                         0.5 * (std::norm(z1) + std::norm(z2));
    return prefactor * std::exp(expo);
}

Complex propagator(const HamiltonianModel& model, SymbolKind kind,
                   const ComplexLabel& zprime, const ComplexLabel& zdprime, double t,
                   const ShootingOptions& opt) {
    if (t == 0.0) return overlap(zdprime, zprime);
    const auto traj = solve_boundary(model, kind, zprime, zdprime, t, opt);
    return propagator_of(traj, model.params());
}

double action_gap_smoothed_weyl(const HamiltonianModel& model, const PhasePoint& start,
                                double t) {
    const CoherentParams& cp = model.params();
    const auto real_traj = integrate_real(model, SymbolKind::Smoothed, start, t);
    const ComplexLabel z1 = label_of(start, cp);
    const ComplexLabel z2 =
        label_of({real_traj.back().q, real_traj.back().p}, cp);
    const auto smoothed = solve_boundary(model, SymbolKind::Smoothed, z1, z2, t);
    const auto weyl = solve_boundary(model, SymbolKind::Weyl, z1, z2, t);
    return std::abs(smoothed.action + smoothed.iterm - weyl.action);
}

} // namespace sqdyn
