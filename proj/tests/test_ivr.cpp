#include <doctest.h>

#include <cmath>
#include <random>

#include "core/ivr.hpp"
#include "core/quadrature.hpp"
#include "oracles.hpp"

using namespace sqdyn;

namespace {
const CoherentParams kBarrierParams = CoherentParams::from_b(0.3, 0.05);

HamiltonianModel barrier_model() {
    return HamiltonianModel::barrier(1.0, 1.0, 5.0, 1.0, kBarrierParams);
}

HamiltonianModel free_model() {
    return HamiltonianModel::polynomial(1.0, {}, kBarrierParams);
}

// fourth-order centered first derivative
std::vector<Complex> derivative4(const std::vector<Complex>& f, double h) {
    std::vector<Complex> d(f.size(), Complex(0.0));
    for (std::size_t i = 2; i + 2 < f.size(); ++i)
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    return d;
}
} // namespace

TEST_CASE("free particle: the coherent-state IVR is exact") {
    const auto model = free_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-25.0, 25.0, 4097};
    for (double t : {0.5, 2.0, 10.0}) {
        const auto pkt = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, t, grid);
        for (std::size_t i = 0; i < grid.count; i += 7) {
            const Complex exact =
                oracles::free_packet(0.0, 1.0, cp.b, cp.hbar, 1.0, grid.at(i), t);
            CHECK(std::abs(pkt.amplitude[i] - exact) < 1e-10);
        }
        CHECK(pkt.norm == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("free particle: Herman-Kluk prefactor and frozen width") {
    const auto model = free_model();
    const auto& cp = kBarrierParams;
    const double t = 2.0;
    const XGrid grid{-12.0, 12.0, 2049};
    const auto pkt = mixed_packet(model, MixedMethod::HermanKluk, {0.0, 1.0}, t, grid);
    const Complex pref_expect = std::sqrt(1.0 - I_UNIT * t * cp.c / (2.0 * cp.b));
    CHECK(std::abs(pkt.prefactor - pref_expect) < 1e-10);
    // fixed-width gaussian with the same action phase as the exact packet
    for (double x : {1.0, 2.0, 2.5}) {
        const Complex expect =
            std::pow(M_PI, -0.25) / std::sqrt(cp.b) * pref_expect *
            std::exp(-0.5 * std::pow((x - t) / cp.b, 2) +
                     I_UNIT / cp.hbar * (1.0 * (x - t) + 0.5 * t));
        CHECK(std::abs(pkt.amplitude_at(cp, x) - expect) < 1e-10);
    }
    // norm grows: the non-physical probability increase
    CHECK(pkt.norm > 1.0);
    CHECK(pkt.norm ==
          doctest::Approx(1.0 / std::sqrt(1.0 - std::norm(pkt.gamma))).epsilon(1e-6));
}

TEST_CASE("t = 0 returns the initial coherent state for every method") {
    const auto model = barrier_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-4.0, 4.0, 1025};
    for (MixedMethod method :
         {MixedMethod::SmoothedIVR, MixedMethod::HermanKluk, MixedMethod::Heller}) {
        const auto pkt = mixed_packet(model, method, {0.2, 0.7}, 0.0, grid);
        for (std::size_t i = 0; i < grid.count; i += 13) {
            const Complex expect = coherent_wavefunction({0.2, 0.7}, cp, grid.at(i));
            CHECK(std::abs(pkt.amplitude[i] - expect) < 1e-12);
        }
    }
}

TEST_CASE("prefactor identity on random symplectic matrices") {
    std::mt19937 rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto m = oracles::random_symplectic(rng);
        const Complex gamma = gamma_of(m);
        const Complex lhs =
            std::sqrt(0.5 * Complex(m.m_pp + m.m_qq, m.m_pq - m.m_qp));
        const Complex rhs = std::sqrt((1.0 + gamma) / (1.0 - std::norm(gamma))) /
                            std::sqrt(Complex(m.m_qq, m.m_qp));
        // identity up to the undetermined square-root sign
        const double diff = std::min(std::abs(lhs - rhs), std::abs(lhs + rhs));
        CHECK(diff < 1e-10);
        CHECK(std::abs(lhs * lhs - rhs * rhs) < 1e-10);
    }
}

TEST_CASE("norm laws on the barrier scenario") {
    const auto model = barrier_model();
    const XGrid grid{-7.2, 7.2, 4097};
    for (double t : {4.0, 6.0, 8.0, 10.0}) {
        const auto sivr = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, t, grid);
        CHECK(sivr.norm == doctest::Approx(1.0).epsilon(1e-8));
        const auto heller = mixed_packet(model, MixedMethod::Heller, {0.0, 1.0}, t, grid);
        CHECK(heller.norm == doctest::Approx(1.0).epsilon(1e-8));
        const auto hk = mixed_packet(model, MixedMethod::HermanKluk, {0.0, 1.0}, t, grid);
        const double expect = 1.0 / std::sqrt(1.0 - std::norm(hk.gamma));
        CHECK(hk.norm == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("packet width laws from measured moments") {
    const auto model = barrier_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-7.2, 7.2, 8193};
    const double h = grid.spacing();
    for (double t : {2.0, 4.0}) {
        const auto pkt = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, t, grid);
        std::vector<double> dens(grid.count), qd(grid.count), qqd(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            dens[i] = std::norm(pkt.amplitude[i]);
            qd[i] = grid.at(i) * dens[i];
            qqd[i] = std::pow(grid.at(i) - pkt.q_r, 2) * dens[i];
        }
        const double nrm = simpson_sampled(dens, h);
        const double q_mean = simpson_sampled(qd, h) / nrm;
        CHECK(q_mean == doctest::Approx(pkt.q_r).epsilon(1e-7));
        const double q_var = simpson_sampled(qqd, h) / nrm;
        const double expect_q =
            0.5 * cp.b * cp.b * (pkt.m.m_qq * pkt.m.m_qq + pkt.m.m_qp * pkt.m.m_qp);
        CHECK(q_var == doctest::Approx(expect_q).epsilon(1e-6));

        // momentum moments via derivatives
        const auto dpsi = derivative4(pkt.amplitude, h);
        std::vector<Complex> pd(grid.count);
        std::vector<double> ppd(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            pd[i] = std::conj(pkt.amplitude[i]) * (-I_UNIT * cp.hbar) * dpsi[i];
            ppd[i] = cp.hbar * cp.hbar * std::norm(dpsi[i]);
        }
        const double p_mean = simpson_sampled(pd, h).real() / nrm;
        const double p_var = simpson_sampled(ppd, h) / nrm - p_mean * p_mean;
        CHECK(p_mean == doctest::Approx(pkt.p_r).epsilon(1e-5));
        const double expect_p =
            0.5 * cp.c * cp.c * (pkt.m.m_pq * pkt.m.m_pq + pkt.m.m_pp * pkt.m.m_pp);
        CHECK(p_var == doctest::Approx(expect_p).epsilon(1e-5));
    }
}

TEST_CASE("prefactor never singular along the barrier run") {
    const auto model = barrier_model();
    const auto traj = integrate_real(model, SymbolKind::Smoothed, {0.0, 1.0}, 10.0);
    for (const auto& s : traj.samples) {
        const double mag = std::abs(Complex(s.m.m_qq, s.m.m_qp));
        CHECK(mag > 1e-12);
        CHECK(mag >= 1.0 / std::abs(Complex(s.m.m_pp, -s.m.m_pq)) - 1e-9);
    }
}

TEST_CASE("harmonic oscillator: all methods coincide with the exact packet") {
    // times past pi and past 2 pi force the square-root prefactors off the
    // principal branch; only the continued phase reproduces the exact packet
    const double omega = 1.0, hbar = 1.0;
    const auto cp = CoherentParams::from_b(std::sqrt(hbar / omega), hbar);
    const auto model = HamiltonianModel::harmonic(1.0, omega, cp);
    const XGrid grid{-8.0, 8.0, 2049};
    const PhasePoint start{1.0, 0.5};
    for (double t : {0.7, 2.9, 4.5, 7.1}) {
        const auto sivr = mixed_packet(model, MixedMethod::SmoothedIVR, start, t, grid);
        const auto hk = mixed_packet(model, MixedMethod::HermanKluk, start, t, grid);
        const auto heller = mixed_packet(model, MixedMethod::Heller, start, t, grid);
        for (std::size_t i = 0; i < grid.count; i += 11) {
            const Complex exact = oracles::ho_coherent(start.q, start.p, omega, cp.b,
                                                       hbar, 1.0, grid.at(i), t);
            CHECK(std::abs(sivr.amplitude[i] - exact) < 1e-8);
            CHECK(std::abs(hk.amplitude[i] - exact) < 1e-8);
            CHECK(std::abs(heller.amplitude[i] - exact) < 1e-8);
        }
    }
}

TEST_CASE("heller equals the smoothed-symbol packet on the free particle") {
    const auto model = free_model();
    const XGrid grid{-10.0, 10.0, 1025};
    const auto sivr = mixed_packet(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, 3.0, grid);
    const auto heller = mixed_packet(model, MixedMethod::Heller, {0.0, 1.0}, 3.0, grid);
    for (std::size_t i = 0; i < grid.count; i += 9)
        CHECK(std::abs(sivr.amplitude[i] - heller.amplitude[i]) < 1e-10);
}

TEST_CASE("complex endpoint momentum is real on the packet center") {
    const auto model = barrier_model();
    const auto pkt = mixed_packet_params(model, MixedMethod::SmoothedIVR, {0.0, 1.0}, 3.0);
    CHECK(pkt.endpoint_momentum(kBarrierParams, pkt.q_r).imag() == doctest::Approx(0.0));
    CHECK(pkt.endpoint_momentum(kBarrierParams, pkt.q_r).real() ==
          doctest::Approx(pkt.p_r));
    CHECK(std::abs(pkt.endpoint_momentum(kBarrierParams, pkt.q_r + 0.2).imag()) > 0.0);
}

TEST_CASE("propagate_state reproduces a single packet (reproducing kernel)") {
    const auto model = free_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-8.0, 8.0, 1025};
    const PhasePoint start{0.0, 1.0};
    std::vector<Complex> psi0(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        psi0[i] = coherent_wavefunction(start, cp, grid.at(i));

    const double t = 1.5;
    const auto ps = husimi_support(psi0, grid, cp, 81, 81);
    const auto psi_t = propagate_state(model, MixedMethod::SmoothedIVR, psi0, grid, t, ps);
    const auto direct = mixed_packet(model, MixedMethod::SmoothedIVR, start, t, grid);
    std::vector<double> diff2(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        diff2[i] = std::norm(psi_t[i] - direct.amplitude[i]);
    CHECK(std::sqrt(simpson_sampled(diff2, grid.spacing())) < 1e-4);
}

TEST_CASE("propagate_state is thread-count invariant") {
    const auto model = free_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-6.0, 6.0, 257};
    std::vector<Complex> psi0(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        psi0[i] = coherent_wavefunction({0.0, 1.0}, cp, grid.at(i));
    const auto ps = husimi_support(psi0, grid, cp, 31, 31);
    PropagateOptions serial, threaded;
    threaded.threads = 3;
    const auto a = propagate_state(model, MixedMethod::SmoothedIVR, psi0, grid, 0.8, ps,
                                   serial);
    const auto b = propagate_state(model, MixedMethod::SmoothedIVR, psi0, grid, 0.8, ps,
                                   threaded);
    for (std::size_t i = 0; i < grid.count; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
}

TEST_CASE("propagate_state flags an under-resolved phase-space grid") {
    const auto model = free_model();
    const auto& cp = kBarrierParams;
    const XGrid grid{-8.0, 8.0, 513};
    std::vector<Complex> psi0(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        psi0[i] = coherent_wavefunction({0.0, 1.0}, cp, grid.at(i));
    PhaseSpaceGrid ps = husimi_support(psi0, grid, cp, 7, 7);
    PropagateOptions opt;
    opt.verify_convergence = true;
    CHECK_THROWS_AS(
        (void)propagate_state(model, MixedMethod::SmoothedIVR, psi0, grid, 1.5, ps, opt),
        Error);
}

TEST_CASE("propagate_state: one harmonic revolution returns the ground state") {
    const double omega = 1.0, hbar = 1.0;
    const auto cp = CoherentParams::from_b(std::sqrt(hbar / omega), hbar);
    const auto model = HamiltonianModel::harmonic(1.0, omega, cp);
    const XGrid grid{-8.0, 8.0, 1025};
    std::vector<Complex> psi0(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        psi0[i] = coherent_wavefunction({0.0, 0.0}, cp, grid.at(i));

    const double t = 2.0 * M_PI / omega;
    const auto ps = husimi_support(psi0, grid, cp, 61, 61);
    const auto psi_t = propagate_state(model, MixedMethod::SmoothedIVR, psi0, grid, t, ps);
    // overlap with psi0 e^{-i w t / 2}
    std::vector<Complex> ov(grid.count);
    const Complex phase = std::exp(-0.5 * I_UNIT * omega * t);
    for (std::size_t i = 0; i < grid.count; ++i)
        ov[i] = std::conj(phase * psi0[i]) * psi_t[i];
    const Complex fid = simpson_sampled(ov, grid.spacing());
    CHECK(std::abs(fid) > 1.0 - 1e-6);
    CHECK(fid.real() > 1.0 - 1e-4);
}

TEST_CASE("coordinate propagator: brute force equals the free kernel") {
    const auto model = free_model();
    const double x1 = -0.3, x2 = 1.9, t = 1.2;
    const Complex brute = coordinate_propagator(model, MixedMethod::SmoothedIVR, x1, x2, t,
                                                CoordinateMode::BruteForce);
    const Complex exact = oracles::free_kernel(x2, x1, t, 1.0, kBarrierParams.hbar);
    CHECK(std::abs(brute - exact) < 1e-5 * std::abs(exact) + 1e-5);
}

TEST_CASE("stationary-phase coordinate propagator properties") {
    const auto model = barrier_model();
    const double x1 = 0.0, x2 = 1.5, t = 2.0;
    const Complex hk = coordinate_propagator(model, MixedMethod::HermanKluk, x1, x2, t,
                                             CoordinateMode::StationaryPhase);
    const Complex heller = coordinate_propagator(model, MixedMethod::Heller, x1, x2, t,
                                                 CoordinateMode::StationaryPhase);
    CHECK(std::abs(hk - heller) < 1e-12 * std::abs(hk)); // both are Van Vleck

    const Complex sivr = coordinate_propagator(model, MixedMethod::SmoothedIVR, x1, x2, t,
                                                CoordinateMode::StationaryPhase);
    CHECK(std::abs(sivr) > 0.0); // smoothed quantities differ only by O(hbar)
    CHECK(std::abs(sivr - hk) < 0.2 * std::abs(hk));

    // m_qp -> 0 at t -> 0 is a focal point
    CHECK_THROWS_AS((void)coordinate_propagator(model, MixedMethod::Heller, 0.0, 0.0,
                                                1e-13, CoordinateMode::StationaryPhase),
                    Error);
}

TEST_CASE("van vleck agreement of the brute-force quadratures on the barrier") {
    const auto model = barrier_model();
    const double t = 2.0;
    for (double x2 : {1.3, 1.8}) {
        for (MixedMethod method : {MixedMethod::HermanKluk, MixedMethod::SmoothedIVR}) {
            const Complex brute = coordinate_propagator(model, method, 0.0, x2, t,
                                                        CoordinateMode::BruteForce);
            const Complex spa = coordinate_propagator(model, method, 0.0, x2, t,
                                                      CoordinateMode::StationaryPhase);
            CHECK(std::abs(std::abs(brute) / std::abs(spa) - 1.0) < 0.02);
            double dphi = std::arg(brute / spa);
            CHECK(std::abs(dphi) < 0.05);
        }
    }
}

TEST_CASE("sampling spreads") {
    const double hbar = kBarrierParams.hbar;
    CHECK(std::isinf(sampling_spread(TangentMatrix{}, MixedMethod::HermanKluk, hbar)));
    CHECK(std::isinf(sampling_spread(TangentMatrix{}, MixedMethod::SmoothedIVR, hbar)));

    // free particle: the HK zone shrinks with t while the coherent-state IVR
    // zone stays bounded away from zero (it approaches hbar/sqrt(2)), so the
    // usable region grows relative to HK
    const auto model = free_model();
    const auto early = integrate_real(model, SymbolKind::Weyl, {0.0, 1.0}, 1.0).back().m;
    const auto late = integrate_real(model, SymbolKind::Weyl, {0.0, 1.0}, 10.0).back().m;
    CHECK(sampling_spread(late, MixedMethod::HermanKluk, hbar) <
          sampling_spread(early, MixedMethod::HermanKluk, hbar));
    CHECK(sampling_spread(late, MixedMethod::SmoothedIVR, hbar) > hbar / std::sqrt(2.0));
    CHECK(sampling_spread(late, MixedMethod::SmoothedIVR, hbar) /
              sampling_spread(late, MixedMethod::HermanKluk, hbar) >
          sampling_spread(early, MixedMethod::SmoothedIVR, hbar) /
              sampling_spread(early, MixedMethod::HermanKluk, hbar));

    // direct arithmetic at t = 10: m_qp = c t / b
    const double mqp = kBarrierParams.c * 10.0 / kBarrierParams.b;
    const double hk_expect =
        hbar / std::sqrt(mqp) / std::sqrt(std::abs(Complex(2.0, -mqp)));
    CHECK(sampling_spread(late, MixedMethod::HermanKluk, hbar) ==
          doctest::Approx(hk_expect).epsilon(1e-10));
    const double sivr_expect =
        hbar / std::sqrt(2.0 * mqp) * std::sqrt(std::abs(Complex(1.0, mqp)));
    CHECK(sampling_spread(late, MixedMethod::SmoothedIVR, hbar) ==
          doctest::Approx(sivr_expect).epsilon(1e-10));
}
