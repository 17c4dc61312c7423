// Acceptance suite: one pass/fail line per criterion, pinned tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "core/asymptotics.hpp"
#include "core/classical.hpp"
#include "core/coherent.hpp"
#include "core/complextraj.hpp"
#include "core/hamiltonian.hpp"
#include "core/ivr.hpp"
#include "core/quadrature.hpp"
#include "core/quantum.hpp"
#include "core/spectral.hpp"
#include "../oracles.hpp"

using namespace sqdyn;

namespace {

int g_failures = 0;

struct Criterion {
    std::string label;
    std::chrono::steady_clock::time_point start;

    explicit Criterion(std::string text)
        : label(std::move(text)), start(std::chrono::steady_clock::now()) {}

    void report(bool pass, const std::string& detail) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%-34s %s  (%s; %.2f s)\n", label.c_str(), pass ? "PASS" : "FAIL",
                    detail.c_str(), secs);
        if (!pass) ++g_failures;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

HamiltonianModel barrier_model() {
    return HamiltonianModel::barrier(1.0, 1.0, 5.0, 1.0, CoherentParams::from_b(0.3, 0.05));
}

void criterion1_free_particle() {
    Criterion c("1. free-particle exactness");
    const auto cp = CoherentParams::from_b(0.3, 0.05);
    const auto model = HamiltonianModel::polynomial(1.0, {}, cp);
    const XGrid grid{-25.0, 25.0, 4097};
    double worst = 0.0;
    for (double t : {0.5, 2.0, 10.0}) {
        const auto pkt = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, t, grid);
        for (std::size_t i = 0; i < grid.count; ++i) {
            const Complex exact =
                oracles::free_packet(0.0, 1.0, cp.b, cp.hbar, 1.0, grid.at(i), t);
            worst = std::max(worst, std::abs(pkt.amplitude[i] - exact));
        }
    }
    c.report(worst < 1e-10, "max pointwise deviation " + fmt(worst) + " vs 1e-10");
}

void criterion2_harmonic() {
    Criterion c("2. harmonic-oscillator exactness");
    const double omega = 1.0, hbar = 1.0;
    const auto cp = CoherentParams::from_b(std::sqrt(hbar / omega), hbar);
    const auto model = HamiltonianModel::harmonic(1.0, omega, cp);

    // (a) complex propagator against the closed form, |z| <= 3, t in [0, 4 pi]
    double worst_k = 0.0;
    for (double mag : {0.3, 1.0, 2.0, 3.0})
        for (double phase : {0.0, 1.1, 2.5, 4.4})
            for (double t : {0.0, 0.4, 1.3, 2.7, 4.0, 5.9, 7.2, 9.1, 10.5, 4.0 * M_PI}) {
                const Complex z = mag * std::exp(Complex(0.0, phase));
                const Complex exact =
                    std::exp(Complex(0.0, -0.5 * omega * t)) *
                    std::exp(std::norm(z) * (std::exp(Complex(0.0, -omega * t)) - 1.0));
                const Complex got = propagator(model, SymbolKind::Smoothed,
                                               ComplexLabel{z}, ComplexLabel{z}, t);
                worst_k = std::max(worst_k, std::abs(got - exact));
            }
    const bool pass_a = worst_k < 1e-8;

    // (b) all three rules on m <= 20
    double worst_e = 0.0;
    for (QuantizationRule rule :
         {QuantizationRule::SmoothedPlusI, QuantizationRule::AntismoothedMinusI,
          QuantizationRule::WeylWKB}) {
        const auto levels = quantize(model, rule, 0, 20);
        for (const auto& lvl : levels)
            worst_e =
                std::max(worst_e, std::abs(lvl.energy - hbar * omega * (lvl.m + 0.5)));
    }
    const bool pass_b = worst_e < 1e-8;

    // (c) semiclassical Husimi against the closed annulus form on a 100x100 grid
    const int m = 4;
    const auto lvl = quantize(model, QuantizationRule::SmoothedPlusI, m, m)[0];
    double worst_h = 0.0;
    const PhaseSpaceGrid ps{-4.0, 4.0, -4.0, 4.0, 100, 100};
    for (std::size_t iq = 0; iq < ps.nq; ++iq)
        for (std::size_t ip = 0; ip < ps.np; ++ip) {
            const double q = ps.q_min + double(iq) * ps.dq();
            const double p = ps.p_min + double(ip) * ps.dp();
            const double z2 = 0.5 * (q * q / (cp.b * cp.b) + p * p / (cp.c * cp.c));
            const double got =
                husimi_semiclassical_at(model, QuantizationRule::SmoothedPlusI, lvl,
                                        {q, p});
            const double expect =
                ho_reference(m, z2, HoReference::SemiclassicalExpanded);
            if (!std::isnan(got)) worst_h = std::max(worst_h, std::abs(got - expect));
        }
    const bool pass_c = worst_h < 1e-10;

    c.report(pass_a && pass_b && pass_c, "K " + fmt(worst_k) + " vs 1e-8, E " +
                                             fmt(worst_e) + " vs 1e-8, husimi " +
                                             fmt(worst_h) + " vs 1e-10");
}

void criterion3_barrier() {
    Criterion c("3. barrier scenario (fig. 1 data)");
    const auto model = barrier_model();
    const auto& cp = model.params();
    const auto basis = build_basis(model, BasisSpec{400, 0.0, 0.0});
    const auto sol = diagonalize(model, basis, false);
    const XGrid grid{-7.2, 7.2, 4097};
    ExactEvolver evolver(sol, grid, cp.hbar);
    std::vector<Complex> psi0(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        psi0[i] = coherent_wavefunction({0.0, 1.0}, cp, grid.at(i));

    // regression bounds frozen from the first oracle run (L2 errors measured
    // 0.168 / 0.335 / 0.319 / 0.193 on this grid)
    const double l2_bound[4] = {0.22, 0.44, 0.42, 0.26};
    const double times[4] = {4.0, 6.0, 8.0, 10.0};

    bool pass = true;
    std::string detail;
    double hk_peak10 = 0.0, exact_peak10 = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double t = times[k];
        const auto exact = evolver.evolve(psi0, t).psi;
        const auto sivr = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, t, grid);
        const auto hk = mixed_packet(model, MixedMethod::HermanKluk, {0.0, 1.0}, t, grid);

        std::vector<double> diff2(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i)
            diff2[i] = std::norm(sivr.amplitude[i] - exact[i]);
        const double l2 = std::sqrt(simpson_sampled(diff2, grid.spacing()));
        if (l2 > l2_bound[k]) pass = false;
        if (k == 0) detail = "L2(t=4) " + fmt(l2) + " vs " + fmt(l2_bound[0]);

        if (std::abs(sivr.norm - 1.0) > 1e-8) pass = false;
        const double hk_pred = 1.0 / std::sqrt(1.0 - std::norm(hk.gamma));
        if (std::abs(hk.norm - hk_pred) > 1e-4) pass = false;

        if (t == 10.0) {
            for (std::size_t i = 0; i < grid.count; ++i) {
                hk_peak10 = std::max(hk_peak10, std::norm(hk.amplitude[i]));
                exact_peak10 = std::max(exact_peak10, std::norm(exact[i]));
            }
        }
    }
    if (!(hk_peak10 > exact_peak10)) pass = false;
    detail += ", HK peak " + fmt(hk_peak10) + " > exact " + fmt(exact_peak10);
    c.report(pass, detail);
}

void criterion4_van_vleck() {
    Criterion c("4. van Vleck recovery");
    const auto model = barrier_model();
    const double t = 2.0;
    const double pairs[3][2] = {{0.0, 1.3}, {0.0, 1.8}, {-0.3, 1.5}};
    bool pass = true;
    double worst_mod = 0.0, worst_arg = 0.0;
    for (const auto& pr : pairs) {
        for (MixedMethod method : {MixedMethod::HermanKluk, MixedMethod::SmoothedIVR}) {
            const Complex brute = coordinate_propagator(model, method, pr[0], pr[1], t,
                                                        CoordinateMode::BruteForce);
            const Complex spa = coordinate_propagator(model, method, pr[0], pr[1], t,
                                                      CoordinateMode::StationaryPhase);
            const double mod = std::abs(std::abs(brute) / std::abs(spa) - 1.0);
            const double darg = std::abs(std::arg(brute / spa));
            worst_mod = std::max(worst_mod, mod);
            worst_arg = std::max(worst_arg, darg);
            if (mod > 0.02 || darg > 0.05) pass = false;
        }
    }
    c.report(pass, "modulus " + fmt(worst_mod) + " vs 0.02, phase " + fmt(worst_arg) +
                       " vs 0.05 rad");
}

void criterion5_appendix_c() {
    Criterion c("5. effective-phase cancellation");
    std::vector<double> hbars{0.2, 0.1, 0.05, 0.025, 0.0125};
    std::vector<double> deltas;
    for (double hbar : hbars) {
        const auto cp = CoherentParams::from_b(std::sqrt(hbar), hbar);
        const auto model =
            HamiltonianModel::polynomial(1.0, {0.0, 0.0, 0.0, 0.0, 0.25}, cp);
        deltas.push_back(action_gap_smoothed_weyl(model, {1.1, 0.4}, 1.7));
    }
    const double slope = oracles::loglog_slope(hbars, deltas);
    c.report(std::abs(slope - 2.0) < 0.2, "log-log slope " + fmt(slope) + " vs 2.0 +- 0.2");
}

void criterion6_spa_scaling() {
    Criterion c("6. stationary-phase correction");
    std::vector<double> hbars{0.2, 0.1, 0.05, 0.025};
    std::vector<double> err0, err1;
    for (double hbar : hbars) {
        const Complex ref = oracles::oscillatory_quartic(hbar);
        const auto spa = spa_integrate(0.0, 0.0, 2.0, 0.0, 24.0, 1.0, 0.0, 0.0, hbar);
        err0.push_back(std::abs(ref - spa.a0) / std::abs(spa.a0));
        err1.push_back(std::abs(ref - spa.corrected) / std::abs(spa.a0));
    }
    const double s0 = oracles::loglog_slope(hbars, err0);
    const double s1 = oracles::loglog_slope(hbars, err1);
    c.report(std::abs(s0 - 1.0) < 0.15 && std::abs(s1 - 2.0) < 0.3,
             "uncorrected slope " + fmt(s0) + " vs 1.0 +- 0.15, corrected " + fmt(s1) +
                 " vs 2.0 +- 0.3");
}

void criterion7_rule_separation() {
    Criterion c("7. quantization-rule separation");
    std::vector<double> hbars{0.2, 0.1, 0.05};
    bool pass = true;
    std::string detail;

    // (i) pairwise hbar^2 scaling with the standard width b = sqrt(hbar);
    // the smoothed/antismoothed pair has even hbar^2 corrections and only
    // separates at higher order, so it carries a bound instead of a slope
    for (int m : {3, 5, 8}) {
        std::vector<double> d_sw, d_wa, d_sa;
        for (double hbar : hbars) {
            const auto cp = CoherentParams::from_b(std::sqrt(hbar), hbar);
            const auto model =
                HamiltonianModel::polynomial(1.0, {0.0, 0.0, 0.0, 0.0, 0.25}, cp);
            const double e1 =
                quantize(model, QuantizationRule::SmoothedPlusI, m, m)[0].energy;
            const double e2 =
                quantize(model, QuantizationRule::AntismoothedMinusI, m, m)[0].energy;
            const double ew = quantize(model, QuantizationRule::WeylWKB, m, m)[0].energy;
            d_sw.push_back(std::abs(e1 - ew));
            d_wa.push_back(std::abs(ew - e2));
            d_sa.push_back(std::abs(e1 - e2));
        }
        const double s_sw = oracles::loglog_slope(hbars, d_sw);
        const double s_wa = oracles::loglog_slope(hbars, d_wa);
        if (std::abs(s_sw - 2.0) > 0.3 || std::abs(s_wa - 2.0) > 0.3) pass = false;
        for (std::size_t i = 0; i < hbars.size(); ++i)
            if (d_sa[i] > 0.5 * hbars[i] * hbars[i]) pass = false;
        if (m == 5)
            detail = "slopes s-w " + fmt(s_sw) + ", w-a " + fmt(s_wa) + " vs 2 +- 0.3";
    }

    // (ii) each rule against exact diagonalization for m = 0..10 within
    // 2 hbar^2 (model energy units); the curvature-matched width
    // b^3 = hbar/sqrt(3/2) keeps the smoothed m = 0 level representable
    double worst_ratio = 0.0;
    for (double hbar : hbars) {
        const double b = std::cbrt(hbar / std::sqrt(1.5));
        const auto cp = CoherentParams::from_b(b, hbar);
        const auto model =
            HamiltonianModel::polynomial(1.0, {0.0, 0.0, 0.0, 0.0, 0.25}, cp);
        const double e10 = quantize(model, QuantizationRule::WeylWKB, 10, 10)[0].energy;
        const auto basis = build_basis(model, BasisSpec{0, 4.0 * e10, 0.0});
        const auto sol = diagonalize(model, basis, false);
        for (QuantizationRule rule :
             {QuantizationRule::SmoothedPlusI, QuantizationRule::AntismoothedMinusI,
              QuantizationRule::WeylWKB}) {
            const auto levels = quantize(model, rule, 0, 10);
            for (const auto& lvl : levels) {
                const double err = std::abs(lvl.energy - sol.energies[lvl.m]);
                worst_ratio = std::max(worst_ratio, err / (2.0 * hbar * hbar));
                if (err > 2.0 * hbar * hbar) pass = false;
            }
        }
    }
    detail += ", worst |dE|/2h^2 " + fmt(worst_ratio);
    c.report(pass, detail);
}

void criterion8_property_suites() {
    Criterion c("8. property spot checks");
    bool pass = true;
    std::string failed;

    // symplecticity along the barrier trajectory
    {
        const auto model = barrier_model();
        const auto traj = integrate_real(model, SymbolKind::Smoothed, {0.0, 1.0}, 10.0);
        for (const auto& s : traj.samples)
            if (std::abs(s.m.det() - 1.0) > 1e-9) pass = false;
        if (!pass) failed += " symplecticity";
    }

    // action derivative identities at a converged complex trajectory
    {
        const auto model = barrier_model();
        const auto& cp = model.params();
        const auto z1 = label_of({0.1, 0.9}, cp);
        const auto z2 = label_of({0.8, 0.6}, cp);
        const double t = 1.2, h = 1e-5;
        const auto base = solve_boundary(model, SymbolKind::Smoothed, z1, z2, t);
        auto S_of = [&](Complex dz2) {
            return solve_boundary(model, SymbolKind::Smoothed, z1,
                                  ComplexLabel{z2.z + dz2}, t)
                .action;
        };
        const Complex dS_dv2 =
            (S_of(std::conj(Complex(h, 0))) - S_of(std::conj(Complex(-h, 0)))) / (2.0 * h);
        const Complex u2 = I_UNIT / cp.hbar * dS_dv2;
        if (std::abs(u2 - base.u_dprime) > 1e-5 * std::max(1.0, std::abs(base.u_dprime))) {
            pass = false;
            failed += " action-derivative";
        }
    }

    // packet width law on the barrier
    {
        const auto model = barrier_model();
        const auto& cp = model.params();
        const XGrid grid{-7.2, 7.2, 8193};
        const auto pkt = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, 4.0, grid);
        std::vector<double> dens(grid.count), qqd(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            dens[i] = std::norm(pkt.amplitude[i]);
            qqd[i] = std::pow(grid.at(i) - pkt.q_r, 2) * dens[i];
        }
        const double var = simpson_sampled(qqd, grid.spacing()) /
                           simpson_sampled(dens, grid.spacing());
        const double expect =
            0.5 * cp.b * cp.b * (pkt.m.m_qq * pkt.m.m_qq + pkt.m.m_qp * pkt.m.m_qp);
        if (std::abs(var - expect) > 1e-6 * expect) {
            pass = false;
            failed += " width-law";
        }
    }

    // prefactor identity on random symplectic matrices
    {
        std::mt19937 rng(97);
        for (int i = 0; i < 100; ++i) {
            const auto m = oracles::random_symplectic(rng);
            const Complex gamma = gamma_of(m);
            const Complex lhs =
                std::sqrt(0.5 * Complex(m.m_pp + m.m_qq, m.m_pq - m.m_qp));
            const Complex rhs = std::sqrt((1.0 + gamma) / (1.0 - std::norm(gamma))) /
                                std::sqrt(Complex(m.m_qq, m.m_qp));
            if (std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)) > 1e-10) {
                pass = false;
                failed += " prefactor-identity";
                break;
            }
        }
    }

    // monomial smoothing table, coefficient exact
    {
        const auto c2 = smooth_monomial(2);
        const auto a4 = antismooth_monomial(4);
        if (std::abs(c2[0] - 0.25) > 1e-15 || std::abs(a4[2] + 1.5) > 1e-15 ||
            std::abs(a4[0] - 3.0 / 16.0) > 1e-15) {
            pass = false;
            failed += " monomial-table";
        }
    }

    // overlap/Bargmann agreement
    {
        const auto cp = CoherentParams::from_b(0.8, 1.0);
        const PhasePoint pt{0.6, -1.1};
        const auto grid = auto_grid(pt.q, cp.b, 2001);
        std::vector<Complex> psi(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i)
            psi[i] = coherent_wavefunction(pt, cp, grid.at(i));
        const PhasePoint probe{0.1, -0.4};
        const Complex got = bargmann_transform(psi, grid, probe, cp);
        const Complex expect = overlap(label_of(probe, cp), label_of(pt, cp));
        if (std::abs(got - expect) > 1e-8) {
            pass = false;
            failed += " bargmann";
        }
    }

    c.report(pass, pass ? "all spot checks hold" : ("failing:" + failed));
}

} // namespace

int main() {
    std::printf("sqdyn acceptance suite\n");
    criterion1_free_particle();
    criterion2_harmonic();
    criterion3_barrier();
    criterion4_van_vleck();
    criterion5_appendix_c();
    criterion6_spa_scaling();
    criterion7_rule_separation();
    criterion8_property_suites();
    if (g_failures == 0) {
        std::printf("all acceptance criteria hold\n");
        return 0;
    }
    std::printf("%d criterion(s) failing\n", g_failures);
    return 1;
}
