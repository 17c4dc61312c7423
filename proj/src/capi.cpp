#include "sqdyn.h"

#include <cstring>
#include <string>

#include "core/asymptotics.hpp"
#include "core/classical.hpp"
#include "core/coherent.hpp"
#include "core/complextraj.hpp"
#include "core/errors.hpp"
#include "core/hamiltonian.hpp"
#include "core/ivr.hpp"
#include "core/quantum.hpp"
#include "core/spectral.hpp"

using namespace sqdyn;

struct sqdyn_model {
    HamiltonianModel impl;
};

struct sqdyn_trajectory {
    RealTrajectory impl;
};

struct sqdyn_spectrum {
    EigenSolution impl;
    CoherentParams params;
};

namespace {

thread_local std::string g_last_error;

sqdyn_status status_of(errc code) {
    switch (code) {
        case errc::invalid_argument: return SQDYN_ERR_INVALID_ARGUMENT;
        case errc::unsupported_symbol: return SQDYN_ERR_UNSUPPORTED_SYMBOL;
        case errc::degree_too_high: return SQDYN_ERR_DEGREE_TOO_HIGH;
        case errc::step_failure: return SQDYN_ERR_STEP_FAILURE;
        case errc::nonfinite_state: return SQDYN_ERR_NONFINITE_STATE;
        case errc::degenerate: return SQDYN_ERR_DEGENERATE;
        case errc::no_convergence: return SQDYN_ERR_NO_CONVERGENCE;
        case errc::branch_ambiguity: return SQDYN_ERR_BRANCH_AMBIGUITY;
        case errc::unbound: return SQDYN_ERR_UNBOUND;
        case errc::below_minimum: return SQDYN_ERR_BELOW_MINIMUM;
        case errc::no_bracket: return SQDYN_ERR_NO_BRACKET;
        case errc::grid_too_coarse: return SQDYN_ERR_GRID_TOO_COARSE;
        case errc::not_confining: return SQDYN_ERR_NOT_CONFINING;
        case errc::quadrature_failure: return SQDYN_ERR_QUADRATURE_FAILURE;
        case errc::leakage: return SQDYN_ERR_LEAKAGE;
        case errc::no_root_trajectory: return SQDYN_ERR_NO_ROOT_TRAJECTORY;
        case errc::degenerate_stationary_point:
            return SQDYN_ERR_DEGENERATE_STATIONARY_POINT;
        case errc::zero_crossing: return SQDYN_ERR_ZERO_CROSSING;
        case errc::stationary_point: return SQDYN_ERR_STATIONARY_POINT;
        case errc::internal: return SQDYN_ERR_INTERNAL;
    }
    return SQDYN_ERR_INTERNAL;
}

template <class F>
sqdyn_status guarded(F&& fn) {
    try {
        fn();
        return SQDYN_OK;
    } catch (const Error& err) {
        g_last_error = err.what();
        return status_of(err.code());
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return SQDYN_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SQDYN_ERR_INTERNAL;
    }
}

sqdyn_complex pack(Complex c) { return sqdyn_complex{c.real(), c.imag()}; }
Complex unpack(sqdyn_complex c) { return Complex(c.re, c.im); }

SymbolKind symbol_of(sqdyn_symbol s) {
    switch (s) {
        case SQDYN_SYMBOL_WEYL: return SymbolKind::Weyl;
        case SQDYN_SYMBOL_SMOOTHED: return SymbolKind::Smoothed;
        case SQDYN_SYMBOL_ANTISMOOTHED: return SymbolKind::Antismoothed;
    }
    throw Error(errc::unsupported_symbol, "unknown symbol id");
}

MixedMethod method_of(sqdyn_method m) {
    switch (m) {
        case SQDYN_METHOD_SMOOTHED_IVR: return MixedMethod::SmoothedIVR;
        case SQDYN_METHOD_HERMAN_KLUK: return MixedMethod::HermanKluk;
        case SQDYN_METHOD_HELLER: return MixedMethod::Heller;
    }
    throw Error(errc::invalid_argument, "unknown method id");
}

QuantizationRule rule_of(sqdyn_rule r) {
    switch (r) {
        case SQDYN_RULE_SMOOTHED_PLUS_I: return QuantizationRule::SmoothedPlusI;
        case SQDYN_RULE_ANTISMOOTHED_MINUS_I: return QuantizationRule::AntismoothedMinusI;
        case SQDYN_RULE_WEYL_WKB: return QuantizationRule::WeylWKB;
    }
    throw Error(errc::invalid_argument, "unknown rule id");
}

XGrid grid_of(const double* xs, size_t n) {
    if (!xs || n < 2) throw Error(errc::invalid_argument, "grid needs >= 2 points");
    return XGrid{xs[0], xs[n - 1], n};
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(errc::invalid_argument, what);
}

} // namespace

extern "C" {

const char* sqdyn_version(void) { return "0.1.0"; }

const char* sqdyn_last_error(void) { return g_last_error.c_str(); }

sqdyn_status sqdyn_model_create_harmonic(double mass, double omega, double b,
                                         double hbar, sqdyn_model** out) {
    return guarded([&] {
        require(out, "null output pointer");
        *out = new sqdyn_model{
            HamiltonianModel::harmonic(mass, omega, CoherentParams::from_b(b, hbar))};
    });
}

sqdyn_status sqdyn_model_create_polynomial(double mass, const double* coeffs,
                                           size_t n_coeffs, double b, double hbar,
                                           sqdyn_model** out) {
    return guarded([&] {
        require(out, "null output pointer");
        require(coeffs || n_coeffs == 0, "null coefficients");
        std::vector<double> c(coeffs, coeffs + n_coeffs);
        *out = new sqdyn_model{
            HamiltonianModel::polynomial(mass, c, CoherentParams::from_b(b, hbar))};
    });
}

sqdyn_status sqdyn_model_create_barrier(double v0, double alpha, double a, double mass,
                                        double b, double hbar, sqdyn_model** out) {
    return guarded([&] {
        require(out, "null output pointer");
        *out = new sqdyn_model{
            HamiltonianModel::barrier(v0, alpha, a, mass, CoherentParams::from_b(b, hbar))};
    });
}

void sqdyn_model_free(sqdyn_model* model) { delete model; }

sqdyn_status sqdyn_model_params(const sqdyn_model* model, double* b, double* c,
                                double* hbar, double* mass) {
    return guarded([&] {
        require(model, "null model");
        if (b) *b = model->impl.params().b;
        if (c) *c = model->impl.params().c;
        if (hbar) *hbar = model->impl.params().hbar;
        if (mass) *mass = model->impl.mass();
    });
}

sqdyn_status sqdyn_eval_symbol(const sqdyn_model* model, sqdyn_symbol symbol,
                               sqdyn_complex q, sqdyn_complex p,
                               sqdyn_local_derivs* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto d = model->impl.eval(symbol_of(symbol), unpack(q), unpack(p));
        out->h = pack(d.h);
        out->h_q = pack(d.h_q);
        out->h_p = pack(d.h_p);
        out->h_qq = pack(d.h_qq);
        out->h_pp = pack(d.h_pp);
        out->h_qp = pack(d.h_qp);
    });
}

sqdyn_status sqdyn_potential(const sqdyn_model* model, sqdyn_symbol symbol, double q,
                             double* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        *out = model->impl.potential(symbol_of(symbol), q);
    });
}

sqdyn_status sqdyn_kinetic_shift(const sqdyn_model* model, sqdyn_symbol symbol,
                                 double* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        *out = model->impl.kinetic_shift(symbol_of(symbol));
    });
}

sqdyn_status sqdyn_coherent_wavefunction(const sqdyn_model* model, double q, double p,
                                         const double* xs, size_t n,
                                         sqdyn_complex* out) {
    return guarded([&] {
        require(model && xs && out, "null pointer");
        for (size_t i = 0; i < n; ++i)
            out[i] = pack(coherent_wavefunction({q, p}, model->impl.params(), xs[i]));
    });
}

sqdyn_status sqdyn_overlap(const sqdyn_model* model, double q1, double p1, double q2,
                           double p2, sqdyn_complex* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto& cp = model->impl.params();
        *out = pack(overlap(label_of({q1, p1}, cp), label_of({q2, p2}, cp)));
    });
}

sqdyn_status sqdyn_bargmann(const sqdyn_model* model, const sqdyn_complex* psi,
                            const double* xs, size_t n, double q, double p,
                            sqdyn_complex* out) {
    return guarded([&] {
        require(model && psi && xs && out, "null pointer");
        std::vector<Complex> buf(n);
        for (size_t i = 0; i < n; ++i) buf[i] = unpack(psi[i]);
        *out = pack(bargmann_transform(buf, grid_of(xs, n), {q, p}, model->impl.params()));
    });
}

sqdyn_status sqdyn_integrate(const sqdyn_model* model, sqdyn_symbol symbol, double q0,
                             double p0, double t, sqdyn_trajectory** out) {
    return guarded([&] {
        require(model && out, "null pointer");
        *out = new sqdyn_trajectory{
            integrate_real(model->impl, symbol_of(symbol), {q0, p0}, t)};
    });
}

void sqdyn_trajectory_free(sqdyn_trajectory* traj) { delete traj; }

size_t sqdyn_trajectory_size(const sqdyn_trajectory* traj) {
    return traj ? traj->impl.samples.size() : 0;
}

sqdyn_status sqdyn_trajectory_sample(const sqdyn_trajectory* traj, size_t index,
                                     sqdyn_traj_sample* out) {
    return guarded([&] {
        require(traj && out, "null pointer");
        require(index < traj->impl.samples.size(), "sample index out of range");
        const auto& s = traj->impl.samples[index];
        *out = sqdyn_traj_sample{s.t,        s.q,        s.p,      s.m.m_qq, s.m.m_qp,
                                 s.m.m_pq,   s.m.m_pp,   s.action, s.iterm};
    });
}

sqdyn_status sqdyn_trajectory_energy_drift(const sqdyn_trajectory* traj, double* out) {
    return guarded([&] {
        require(traj && out, "null pointer");
        *out = traj->impl.energy_drift;
    });
}

sqdyn_status sqdyn_gamma(double m_qq, double m_qp, double m_pq, double m_pp,
                         sqdyn_complex* out) {
    return guarded([&] {
        require(out, "null pointer");
        *out = pack(gamma_of(TangentMatrix{m_qq, m_qp, m_pq, m_pp}));
    });
}

sqdyn_status sqdyn_propagator(const sqdyn_model* model, sqdyn_symbol symbol, double q1,
                              double p1, double q2, double p2, double t,
                              sqdyn_propagator_result* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto& cp = model->impl.params();
        const auto z1 = label_of({q1, p1}, cp);
        const auto z2 = label_of({q2, p2}, cp);
        if (t == 0.0) {
            *out = sqdyn_propagator_result{};
            out->value = pack(overlap(z2, z1));
            out->m_vv = pack(Complex(1.0));
            out->v0 = pack(std::conj(z1.z));
            return;
        }
        const auto traj = solve_boundary(model->impl, symbol_of(symbol), z1, z2, t);
        out->value = pack(propagator_of(traj, cp));
        out->action = pack(traj.action);
        out->iterm = pack(traj.iterm);
        out->m_vv = pack(traj.m_vv);
        out->v0 = pack(traj.v_prime);
        out->residual = traj.residual;
    });
}

sqdyn_status sqdyn_propagator_roots(const sqdyn_model* model, sqdyn_symbol symbol,
                                    double q1, double p1, double q2, double p2, double t,
                                    const sqdyn_complex* seeds, size_t n_seeds,
                                    sqdyn_propagator_result* results, size_t* count) {
    return guarded([&] {
        require(model && seeds && results && count, "null pointer");
        const auto& cp = model->impl.params();
        const auto z1 = label_of({q1, p1}, cp);
        const auto z2 = label_of({q2, p2}, cp);
        std::vector<Complex> seed_buf(n_seeds);
        for (size_t i = 0; i < n_seeds; ++i) seed_buf[i] = unpack(seeds[i]);
        const auto roots =
            solve_boundary_roots(model->impl, symbol_of(symbol), z1, z2, t, seed_buf);
        for (size_t i = 0; i < roots.size(); ++i) {
            const auto& traj = roots[i];
            results[i].value = pack(propagator_of(traj, cp));
            results[i].action = pack(traj.action);
            results[i].iterm = pack(traj.iterm);
            results[i].m_vv = pack(traj.m_vv);
            results[i].v0 = pack(traj.v_prime);
            results[i].residual = traj.residual;
        }
        *count = roots.size();
    });
}

sqdyn_status sqdyn_action_gap(const sqdyn_model* model, double q0, double p0, double t,
                              double* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        *out = action_gap_smoothed_weyl(model->impl, {q0, p0}, t);
    });
}

sqdyn_status sqdyn_mixed_packet(const sqdyn_model* model, sqdyn_method method, double q0,
                                double p0, double t, const double* xs, size_t n,
                                sqdyn_complex* amplitudes, sqdyn_packet_info* info) {
    return guarded([&] {
        require(model, "null model");
        MixedPacket pkt;
        if (amplitudes && xs && n >= 2) {
            pkt = mixed_packet(model->impl, method_of(method), {q0, p0}, t,
                               grid_of(xs, n));
            for (size_t i = 0; i < n; ++i) amplitudes[i] = pack(pkt.amplitude[i]);
        } else {
            pkt = mixed_packet_params(model->impl, method_of(method), {q0, p0}, t);
        }
        if (info) {
            info->q_r = pkt.q_r;
            info->p_r = pkt.p_r;
            info->m_qq = pkt.m.m_qq;
            info->m_qp = pkt.m.m_qp;
            info->m_pq = pkt.m.m_pq;
            info->m_pp = pkt.m.m_pp;
            info->gamma = pack(pkt.gamma);
            info->prefactor = pack(pkt.prefactor);
            info->action = pkt.action;
            info->iterm = pkt.iterm;
            info->norm = pkt.norm;
        }
    });
}

sqdyn_status sqdyn_propagate_state(const sqdyn_model* model, sqdyn_method method,
                                   const sqdyn_complex* psi0, const double* xs, size_t n,
                                   double t, double q_min, double q_max, size_t nq,
                                   double p_min, double p_max, size_t np, int threads,
                                   int verify_convergence, sqdyn_complex* psi_out) {
    return guarded([&] {
        require(model && psi0 && xs && psi_out, "null pointer");
        std::vector<Complex> buf(n);
        for (size_t i = 0; i < n; ++i) buf[i] = unpack(psi0[i]);
        PhaseSpaceGrid ps{q_min, q_max, p_min, p_max, nq, np};
        PropagateOptions opt;
        opt.threads = threads;
        opt.verify_convergence = verify_convergence != 0;
        const auto res = propagate_state(model->impl, method_of(method), buf,
                                         grid_of(xs, n), t, ps, opt);
        for (size_t i = 0; i < n; ++i) psi_out[i] = pack(res[i]);
    });
}

sqdyn_status sqdyn_coordinate_propagator(const sqdyn_model* model, sqdyn_method method,
                                         double x_from, double x_to, double t,
                                         sqdyn_coordinate_mode mode, sqdyn_complex* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto cm = (mode == SQDYN_COORD_BRUTE_FORCE) ? CoordinateMode::BruteForce
                                                          : CoordinateMode::StationaryPhase;
        *out = pack(
            coordinate_propagator(model->impl, method_of(method), x_from, x_to, t, cm));
    });
}

sqdyn_status sqdyn_sampling_spread(const sqdyn_model* model, sqdyn_method method,
                                   double m_qq, double m_qp, double m_pq, double m_pp,
                                   double* out) {
    return guarded([&] {
        require(model && out, "null pointer");
        *out = sampling_spread(TangentMatrix{m_qq, m_qp, m_pq, m_pp}, method_of(method),
                               model->impl.params().hbar);
    });
}

sqdyn_status sqdyn_quantize(const sqdyn_model* model, sqdyn_rule rule, int m_min,
                            int m_max, sqdyn_level* out_levels, size_t* out_count) {
    return guarded([&] {
        require(model && out_levels && out_count, "null pointer");
        const auto levels = quantize(model->impl, rule_of(rule), m_min, m_max);
        for (size_t i = 0; i < levels.size(); ++i) {
            const auto& l = levels[i];
            out_levels[i] =
                sqdyn_level{l.m, l.energy, l.action, l.iterm, l.period, l.dI_dE, l.dT_dE};
        }
        *out_count = levels.size();
    });
}

sqdyn_status sqdyn_husimi_semiclassical(const sqdyn_model* model, sqdyn_rule rule,
                                        const sqdyn_level* level, double q_min,
                                        double q_max, size_t nq, double p_min,
                                        double p_max, size_t np, double* density) {
    return guarded([&] {
        require(model && level && density, "null pointer");
        SemiclassicalLevel lvl{level->m,      level->energy, level->action, level->iterm,
                               level->period, level->dI_dE,  level->dT_dE};
        PhaseSpaceGrid ps{q_min, q_max, p_min, p_max, nq, np};
        const auto grid = husimi_semiclassical(model->impl, rule_of(rule), lvl, ps);
        std::memcpy(density, grid.density.data(), grid.density.size() * sizeof(double));
    });
}

sqdyn_status sqdyn_greens_function(const sqdyn_model* model, sqdyn_rule rule, double q,
                                   double p, double energy, double gamma,
                                   sqdyn_complex* out, int* pole_proximity) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto res =
            greens_function(model->impl, rule_of(rule), {q, p}, energy, gamma);
        *out = pack(res.value);
        if (pole_proximity) *pole_proximity = res.pole_proximity ? 1 : 0;
    });
}

sqdyn_status sqdyn_ho_reference(int m, double z_abs2, sqdyn_ho_reference_kind kind,
                                double* out) {
    return guarded([&] {
        require(out, "null pointer");
        HoReference which = HoReference::Exact;
        if (kind == SQDYN_HO_SEMICLASSICAL_FULL) which = HoReference::SemiclassicalFull;
        if (kind == SQDYN_HO_SEMICLASSICAL_EXPANDED)
            which = HoReference::SemiclassicalExpanded;
        *out = ho_reference(m, z_abs2, which);
    });
}

sqdyn_status sqdyn_spectrum_solve(const sqdyn_model* model, int n_basis, double e_max,
                                  double L_override, int with_trust_check,
                                  sqdyn_spectrum** out) {
    return guarded([&] {
        require(model && out, "null pointer");
        const auto basis =
            build_basis(model->impl, BasisSpec{n_basis, e_max, L_override});
        *out = new sqdyn_spectrum{
            diagonalize(model->impl, basis, with_trust_check != 0),
            model->impl.params()};
    });
}

void sqdyn_spectrum_free(sqdyn_spectrum* spectrum) { delete spectrum; }

sqdyn_status sqdyn_spectrum_info(const sqdyn_spectrum* spectrum, size_t* n_levels,
                                 int* trusted, double* box_half_width, double* e_max) {
    return guarded([&] {
        require(spectrum, "null spectrum");
        if (n_levels) *n_levels = spectrum->impl.energies.size();
        if (trusted) *trusted = spectrum->impl.trusted;
        if (box_half_width) *box_half_width = spectrum->impl.basis.L;
        if (e_max) *e_max = spectrum->impl.basis.e_max;
    });
}

sqdyn_status sqdyn_spectrum_energies(const sqdyn_spectrum* spectrum, double* out,
                                     size_t capacity) {
    return guarded([&] {
        require(spectrum && out, "null pointer");
        require(capacity >= spectrum->impl.energies.size(), "capacity too small");
        std::memcpy(out, spectrum->impl.energies.data(),
                    spectrum->impl.energies.size() * sizeof(double));
    });
}

sqdyn_status sqdyn_spectrum_eigenfunction(const sqdyn_spectrum* spectrum, int level,
                                          const double* xs, size_t n, double* out) {
    return guarded([&] {
        require(spectrum && xs && out, "null pointer");
        require(level >= 0 && level < int(spectrum->impl.energies.size()),
                "level out of range");
        const auto wave = spectrum->impl.eigenfunction(level, grid_of(xs, n));
        std::memcpy(out, wave.data(), n * sizeof(double));
    });
}

sqdyn_status sqdyn_spectrum_evolve(const sqdyn_spectrum* spectrum,
                                   const sqdyn_complex* psi0, const double* xs, size_t n,
                                   double t, sqdyn_complex* psi_out, double* captured) {
    return guarded([&] {
        require(spectrum && psi0 && xs && psi_out, "null pointer");
        std::vector<Complex> buf(n);
        for (size_t i = 0; i < n; ++i) buf[i] = unpack(psi0[i]);
        const auto res = evolve_exact(spectrum->impl, buf, grid_of(xs, n), t,
                                      spectrum->params.hbar);
        for (size_t i = 0; i < n; ++i) psi_out[i] = pack(res.psi[i]);
        if (captured) *captured = res.captured;
    });
}

sqdyn_status sqdyn_spectrum_husimi(const sqdyn_spectrum* spectrum, int level,
                                   double q_min, double q_max, size_t nq, double p_min,
                                   double p_max, size_t np, size_t x_resolution,
                                   double* density) {
    return guarded([&] {
        require(spectrum && density, "null pointer");
        PhaseSpaceGrid ps{q_min, q_max, p_min, p_max, nq, np};
        const auto dens =
            husimi_exact(spectrum->impl, level, ps, spectrum->params, x_resolution);
        std::memcpy(density, dens.data(), dens.size() * sizeof(double));
    });
}

sqdyn_status sqdyn_spa_integrate(double f0, double f1, double f2, double f3, double f4,
                                 double g0, double g1, double g2, double hbar,
                                 sqdyn_spa_result* out) {
    return guarded([&] {
        require(out, "null pointer");
        const auto res = spa_integrate(f0, f1, f2, f3, f4, g0, g1, g2, hbar);
        out->a0 = pack(res.a0);
        out->r = res.r;
        out->corrected = pack(res.corrected);
    });
}

} // extern "C"
