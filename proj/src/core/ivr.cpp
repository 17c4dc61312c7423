#include "ivr.hpp"

#include <cmath>
#include <functional>
#include <thread>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rootfind.hpp"

namespace sqdyn {

const char* method_name(MixedMethod method) {
    switch (method) {
        case MixedMethod::SmoothedIVR: return "smoothed-ivr";
        case MixedMethod::HermanKluk: return "herman-kluk";
        case MixedMethod::Heller: return "heller";
    }
    return "?";
}

SymbolKind method_symbol(MixedMethod method) {
    return method == MixedMethod::SmoothedIVR ? SymbolKind::Smoothed : SymbolKind::Weyl;
}

Complex MixedPacket::amplitude_at(const CoherentParams& cp, double x) const {
    const double pref0 = std::pow(M_PI, -0.25) / std::sqrt(cp.b);
    const double dx = (x - q_r) / cp.b;
    Complex expo = I_UNIT / cp.hbar *
                   (p_r * (x - q_r) + 0.5 * p_start * q_start + action);
    if (method == MixedMethod::HermanKluk) {
        expo += -0.5 * dx * dx;
    } else {
        const Complex shape = (1.0 - gamma) / (1.0 + gamma);
        expo += -0.5 * shape * dx * dx;
    }
    return pref0 * prefactor * std::exp(expo);
}

Complex MixedPacket::endpoint_momentum(const CoherentParams& cp, double x) const {
    return p_r + I_UNIT * (1.0 - gamma) / (1.0 + gamma) * cp.c / cp.b * (x - q_r);
}

MixedPacket mixed_packet_params(const HamiltonianModel& model, MixedMethod method,
                                const PhasePoint& start, double t,
                                const IntegrationTolerance& tol) {
    const auto traj = integrate_real(model, method_symbol(method), start, t, tol);
    const auto& f = traj.back();
    const CoherentParams& cp = model.params();

    MixedPacket pkt;
    pkt.method = method;
    pkt.t = t;
    pkt.q_start = start.q;
    pkt.p_start = start.p;
    pkt.q_r = f.q;
    pkt.p_r = f.p;
    pkt.m = f.m;
    pkt.gamma = gamma_of(f.m);
    pkt.action = f.action;

    if (method == MixedMethod::HermanKluk) {
        // sqrt((m_pp + m_qq - i m_qp + i m_pq)/2), phase continued from 1
        const Complex radicand = 0.5 * Complex(f.m.m_pp + f.m.m_qq, f.m.m_pq - f.m.m_qp);
        const double half_arg = traj.half_arg_hk().back();
        pkt.prefactor = std::sqrt(std::abs(radicand)) * std::exp(Complex(0.0, half_arg));
    } else {
        // (m_qq + i m_qp)^{-1/2}, phase continued from 1
        const Complex radicand(f.m.m_qq, f.m.m_qp);
        const double half_arg = traj.half_arg_spread().back();
        pkt.prefactor =
            std::exp(Complex(0.0, -half_arg)) / std::sqrt(std::abs(radicand));
        if (method == MixedMethod::SmoothedIVR) {
            pkt.iterm = f.iterm;
            pkt.prefactor *= std::exp(I_UNIT * f.iterm / cp.hbar);
        }
    }
    return pkt;
}

MixedPacket mixed_packet(const HamiltonianModel& model, MixedMethod method,
                         const PhasePoint& start, double t, const XGrid& grid,
                         const IntegrationTolerance& tol) {
    MixedPacket pkt = mixed_packet_params(model, method, start, t, tol);
    const CoherentParams& cp = model.params();
    pkt.grid = grid;
    pkt.amplitude.resize(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        pkt.amplitude[i] = pkt.amplitude_at(cp, grid.at(i));
    pkt.norm = norm_squared(pkt.amplitude, grid);
    return pkt;
}

PhaseSpaceGrid husimi_support(const std::vector<Complex>& psi, const XGrid& grid,
                              const CoherentParams& cp, std::size_t nq, std::size_t np) {
    const double h = grid.spacing();
    std::vector<double> dens(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) dens[i] = std::norm(psi[i]);
    const double nrm = simpson_sampled(dens, h);

    std::vector<double> qd(psi.size()), qqd(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        qd[i] = grid.at(i) * dens[i];
        qqd[i] = grid.at(i) * grid.at(i) * dens[i];
    }
    const double q_mean = simpson_sampled(qd, h) / nrm;
    const double q_var = simpson_sampled(qqd, h) / nrm - q_mean * q_mean;

    // momentum moments through first derivatives (centered differences)
    std::vector<Complex> dpsi(psi.size(), Complex(0.0));
    for (std::size_t i = 1; i + 1 < psi.size(); ++i)
        dpsi[i] = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
    std::vector<Complex> pd(psi.size());
    std::vector<double> ppd(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        pd[i] = std::conj(psi[i]) * (-I_UNIT * cp.hbar) * dpsi[i];
        ppd[i] = cp.hbar * cp.hbar * std::norm(dpsi[i]);
    }
    const double p_mean = simpson_sampled(pd, h).real() / nrm;
    const double p_var = simpson_sampled(ppd, h) / nrm - p_mean * p_mean;

    const double sq = std::sqrt(std::max(q_var, 0.0) + 0.5 * cp.b * cp.b);
    const double sp = std::sqrt(std::max(p_var, 0.0) + 0.5 * cp.c * cp.c);
    PhaseSpaceGrid g;
    g.q_min = q_mean - 6.0 * sq;
    g.q_max = q_mean + 6.0 * sq;
    g.p_min = p_mean - 6.0 * sp;
    g.p_max = p_mean + 6.0 * sp;
    g.nq = nq;
    g.np = np;
    return g;
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (int tix = 0; tix < threads; ++tix) {
        const std::size_t lo = tix * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<Complex> propagate_once(const HamiltonianModel& model, MixedMethod method,
                                    const std::vector<Complex>& psi0, const XGrid& xgrid,
                                    double t, const PhaseSpaceGrid& ps,
                                    const PropagateOptions& opt) {
    const CoherentParams& cp = model.params();
    const double weight = ps.dq() * ps.dp() / (2.0 * M_PI * cp.hbar);

    // Simpson weights over the tensor grid (odd counts assumed; trapezoid
    // fallback at the last strip otherwise)
    auto line_weight = [](std::size_t i, std::size_t n) {
        if (n % 2 == 0) {
            // composite trapezoid for even counts
            return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        }
        if (i == 0 || i + 1 == n) return 1.0 / 3.0;
        return (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    };

    std::vector<std::vector<Complex>> partial(ps.nq,
                                              std::vector<Complex>(xgrid.count, 0.0));
    parallel_for(ps.nq, opt.threads, [&](std::size_t iq) {
        const double q0 = ps.q_min + double(iq) * ps.dq();
        for (std::size_t ip = 0; ip < ps.np; ++ip) {
            const double p0 = ps.p_min + double(ip) * ps.dp();
            const PhasePoint zp{q0, p0};
            const Complex coeff = bargmann_transform(psi0, xgrid, zp, cp);
            if (std::abs(coeff) < 1e-14) continue;
            const auto pkt = mixed_packet_params(model, method, zp, t, opt.tol);
            const double w =
                weight * line_weight(iq, ps.nq) * line_weight(ip, ps.np);
            for (std::size_t ix = 0; ix < xgrid.count; ++ix)
                partial[iq][ix] += w * coeff * pkt.amplitude_at(cp, xgrid.at(ix));
        }
    });
    std::vector<Complex> out(xgrid.count, 0.0);
    for (std::size_t iq = 0; iq < ps.nq; ++iq)
        for (std::size_t ix = 0; ix < xgrid.count; ++ix) out[ix] += partial[iq][ix];
    return out;
}

} // namespace

std::vector<Complex> propagate_state(const HamiltonianModel& model, MixedMethod method,
                                     const std::vector<Complex>& psi0, const XGrid& xgrid,
                                     double t, const PhaseSpaceGrid& psgrid,
                                     const PropagateOptions& opt) {
    if (psi0.size() != xgrid.count)
        throw Error(errc::invalid_argument, "propagate_state: grid/sample mismatch");
    auto out = propagate_once(model, method, psi0, xgrid, t, psgrid, opt);
    if (opt.verify_convergence) {
        PhaseSpaceGrid fine = psgrid;
        fine.nq = 2 * psgrid.nq - 1;
        fine.np = 2 * psgrid.np - 1;
        const auto refined = propagate_once(model, method, psi0, xgrid, t, fine, opt);
        double diff2 = 0.0;
        std::vector<double> d2(xgrid.count);
        for (std::size_t i = 0; i < xgrid.count; ++i) d2[i] = std::norm(refined[i] - out[i]);
        diff2 = std::sqrt(simpson_sampled(d2, xgrid.spacing()));
        if (diff2 > 1e-4)
            throw Error(errc::grid_too_coarse,
                        "propagate_state: doubling the phase-space grid moves the result by more than 1e-4");
        return refined;
    }
    return out;
}

namespace {

// p' such that the real trajectory from (x_from, p') reaches x_to at time t.
double shoot_momentum(const HamiltonianModel& model, SymbolKind kind, double x_from,
                      double x_to, double t, const IntegrationTolerance& tol) {
    auto endpoint = [&](double p0) {
        return integrate_real(model, kind, {x_from, p0}, t, tol).back();
    };
    // Newton seeded by the free guess with bracket fallback
    double p0 = model.mass() * (x_to - x_from) / t;
    const CoherentParams& cp = model.params();
    for (int it = 0; it < 60; ++it) {
        const auto f = endpoint(p0);
        const double r = f.q - x_to;
        if (std::abs(r) < 1e-11 * (1.0 + std::abs(x_to))) return p0;
        const double slope = cp.b / cp.c * f.m.m_qp; // dq_r / dp'
        if (std::abs(slope) < 1e-12) break;
        p0 -= r / slope;
        if (!std::isfinite(p0)) break;
    }
    // bracket scan fallback
    const double scale = std::max(1.0, std::abs(model.mass() * (x_to - x_from) / t));
    double lo = -20.0 * scale, hi = 20.0 * scale;
    auto res = [&](double p) { return endpoint(p).q - x_to; };
    const int nscan = 200;
    double prev_p = lo, prev_r = res(lo);
    for (int i = 1; i <= nscan; ++i) {
        const double p = lo + (hi - lo) * i / nscan;
        const double r = res(p);
        if (prev_r * r <= 0.0) return bisect(res, prev_p, p, 1e-13);
        prev_p = p;
        prev_r = r;
    }
    throw Error(errc::no_root_trajectory,
                "coordinate_propagator: no real trajectory connects the endpoints");
}

} // namespace

Complex coordinate_propagator(const HamiltonianModel& model, MixedMethod method,
                              double x_from, double x_to, double t, CoordinateMode mode,
                              const IntegrationTolerance& tol) {
    const CoherentParams& cp = model.params();
    if (mode == CoordinateMode::StationaryPhase) {
        const SymbolKind kind = method_symbol(method);
        const double p0 = shoot_momentum(model, kind, x_from, x_to, t, tol);
        const auto traj = integrate_real(model, kind, {x_from, p0}, t, tol);
        const auto& f = traj.back();
        if (std::abs(f.m.m_qp) < 1e-12)
            throw Error(errc::degenerate,
                        "coordinate_propagator: focal point, m_qp -> 0 divergence");
        double phase_action = f.action;
        if (method == MixedMethod::SmoothedIVR) phase_action += f.iterm;
        const Complex pref =
            1.0 / (cp.b * std::sqrt(2.0 * M_PI * I_UNIT * f.m.m_qp));
        return pref * std::exp(I_UNIT * phase_action / cp.hbar);
    }

    // Brute force: integral dq' dp'/(2 pi hbar) <x_to|K(t)|z'> conj(<x_from|z'>)
    const double p_root = shoot_momentum(model, method_symbol(method), x_from, x_to, t, tol);
    const auto root_pkt =
        mixed_packet_params(model, method, {x_from, p_root}, t, tol);
    const Complex shape = (1.0 - root_pkt.gamma) / (1.0 + root_pkt.gamma);
    const double qr_slope = std::abs(cp.b / cp.c * root_pkt.m.m_qp) + 1e-9;
    const double sigma_p =
        cp.b / (std::sqrt(std::max(shape.real(), 1e-3)) * qr_slope);

    const double q_half = 8.0 * cp.b;
    const double p_half = 8.0 * sigma_p;
    const std::size_t nq = 121, np = 121;
    const double dq = 2.0 * q_half / (nq - 1), dp = 2.0 * p_half / (np - 1);

    auto line_weight = [](std::size_t i, std::size_t n) {
        if (i == 0 || i + 1 == n) return 1.0 / 3.0;
        return (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    };

    Complex acc = 0.0;
    for (std::size_t iq = 0; iq < nq; ++iq) {
        const double q0 = x_from - q_half + double(iq) * dq;
        for (std::size_t ip = 0; ip < np; ++ip) {
            const double p0 = p_root - p_half + double(ip) * dp;
            const PhasePoint zp{q0, p0};
            const Complex bra = std::conj(coherent_wavefunction(zp, cp, x_from));
            if (std::abs(bra) < 1e-16) continue;
            const auto pkt = mixed_packet_params(model, method, zp, t, tol);
            acc += line_weight(iq, nq) * line_weight(ip, np) * bra *
                   pkt.amplitude_at(cp, x_to);
        }
    }
    return acc * dq * dp / (2.0 * M_PI * cp.hbar);
}

double sampling_spread(const TangentMatrix& m, MixedMethod method, double hbar) {
    if (std::abs(m.m_qp) < 1e-300) return INFINITY;
    if (method == MixedMethod::HermanKluk) {
        const double mag = std::abs(Complex(m.m_pp + m.m_qq, m.m_pq - m.m_qp));
        return hbar / std::sqrt(std::abs(m.m_qp)) / std::sqrt(mag);
    }
    const double mag = std::abs(Complex(m.m_qq, m.m_qp));
    return hbar / std::sqrt(2.0 * std::abs(m.m_qp)) * std::sqrt(mag);
}

} // namespace sqdyn
