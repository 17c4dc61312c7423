#include "quantum.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"

namespace sqdyn {

double SpectralBasis::phi(int n, double x) const {
    return std::sin(n * M_PI * x / (2.0 * L) + n * M_PI / 2.0) / std::sqrt(L);
}

SpectralBasis build_basis(const HamiltonianModel& model, const BasisSpec& spec) {
    const double hbar = model.params().hbar;
    const double mass = model.mass();
    SpectralBasis basis;

    auto emax_of = [&](int n, double L) {
        return n * n * M_PI * M_PI * hbar * hbar / (8.0 * mass * L * L);
    };
    auto confinement_L = [&](double e) {
        // right-side bisection of V(L) = e from the potential minimum outward
        auto f = [&](double x) { return model.potential(SymbolKind::Weyl, x) - e; };
        double lo = 0.0, hi = 1.0;
        int guard = 0;
        while (f(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 60)
                throw Error(errc::not_confining,
                            "build_basis: potential never reaches E_max");
        }
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (lo + hi);
            (f(m) < 0.0 ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };

    if (spec.n_basis > 0 && spec.L_override > 0.0) {
        basis.n_basis = spec.n_basis;
        basis.L = spec.L_override;
        basis.e_max = emax_of(basis.n_basis, basis.L);
    } else if (spec.n_basis > 0) {
        // self-consistent: V(L) = E_max(N, L); V increasing, E_max decreasing in L
        basis.n_basis = spec.n_basis;
        auto g = [&](double L) {
            return model.potential(SymbolKind::Weyl, L) - emax_of(spec.n_basis, L);
        };
        double lo = 1e-3, hi = 1.0;
        int guard = 0;
        while (g(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 60)
                throw Error(errc::not_confining, "build_basis: no confining width found");
        }
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (lo + hi);
            (g(m) < 0.0 ? lo : hi) = m;
        }
        basis.L = 0.5 * (lo + hi);
        basis.e_max = emax_of(basis.n_basis, basis.L);
    } else if (spec.e_max > 0.0) {
        basis.e_max = spec.e_max;
        basis.L = (spec.L_override > 0.0) ? spec.L_override : confinement_L(spec.e_max);
        basis.n_basis = int(std::ceil(
            std::sqrt(8.0 * mass * spec.e_max) * basis.L / (M_PI * hbar)));
    } else {
        throw Error(errc::invalid_argument, "build_basis: need n_basis or e_max");
    }
    if (model.potential(SymbolKind::Weyl, basis.L) < basis.e_max - 1e-9 * basis.e_max &&
        spec.L_override > 0.0)
        throw Error(errc::not_confining, "build_basis: V(L) below E_max at override L");
    return basis;
}

namespace {

Eigen::MatrixXd hamiltonian_matrix(const HamiltonianModel& model,
                                   const SpectralBasis& basis) {
    const int n = basis.n_basis;
    const double L = basis.L;
    const double hbar = model.params().hbar;
    const double mass = model.mass();

    // phi_m phi_n = [cos((m-n) a(x)) - cos((m+n) a(x))] / 2L with
    // a(x) = pi x / 2L + pi / 2; only 2n+1 distinct potential integrals
    static const auto rule = gauss_legendre(8);
    const int panels = std::max(2 * n, 64);
    std::vector<double> cosint(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) {
        auto f = [&](double x) {
            const double a = k * (M_PI * x / (2.0 * L) + M_PI / 2.0);
            return model.potential(SymbolKind::Weyl, x) * std::cos(a);
        };
        cosint[k] = composite_gl(f, -L, L, panels, rule);
    }
    // doubling check on the most oscillatory entries
    for (int k : {0, n, 2 * n}) {
        auto f = [&](double x) {
            const double a = k * (M_PI * x / (2.0 * L) + M_PI / 2.0);
            return model.potential(SymbolKind::Weyl, x) * std::cos(a);
        };
        const double doubled = composite_gl(f, -L, L, 2 * panels, rule);
        const double scale = std::max(std::abs(cosint[k]), 1.0);
        if (std::abs(doubled - cosint[k]) > 1e-9 * scale)
            throw Error(errc::quadrature_failure,
                        "diagonalize: potential quadrature not converged");
    }

    Eigen::MatrixXd h(n, n);
    for (int row = 1; row <= n; ++row)
        for (int col = row; col <= n; ++col) {
            double v = (cosint[col - row] - cosint[col + row]) / (2.0 * L);
            if (row == col) {
                const double k = row * M_PI / (2.0 * L);
                v += hbar * hbar * k * k / (2.0 * mass);
            }
            h(row - 1, col - 1) = v;
            h(col - 1, row - 1) = v;
        }
    return h;
}

} // namespace

std::vector<double> EigenSolution::eigenfunction(int level, const XGrid& grid) const {
    std::vector<double> out(grid.count, 0.0);
    const auto& coeff = vectors[level];
    for (std::size_t i = 0; i < grid.count; ++i) {
        double acc = 0.0;
        for (int n = 1; n <= basis.n_basis; ++n)
            acc += coeff[n - 1] * basis.phi(n, grid.at(i));
        out[i] = acc;
    }
    return out;
}

EigenSolution diagonalize(const HamiltonianModel& model, const SpectralBasis& basis,
                          bool with_trust_check) {
    const Eigen::MatrixXd h = hamiltonian_matrix(model, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw Error(errc::internal, "diagonalize: eigensolver failed");

    EigenSolution sol;
    sol.basis = basis;
    const int n = basis.n_basis;
    sol.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    sol.vectors.resize(n);
    for (int k = 0; k < n; ++k) {
        sol.vectors[k].resize(n);
        for (int j = 0; j < n; ++j) sol.vectors[k][j] = solver.eigenvectors()(j, k);
    }

    if (with_trust_check) {
        SpectralBasis bigger = basis;
        bigger.n_basis = int(std::ceil(1.25 * n));
        const Eigen::MatrixXd h2 = hamiltonian_matrix(model, bigger);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver2(
            h2, Eigen::EigenvaluesOnly);
        int trusted = 0;
        for (int k = 0; k < n; ++k) {
            const double e1 = sol.energies[k];
            const double e2 = solver2.eigenvalues()(k);
            if (std::abs(e1 - e2) <= 1e-5 * std::max(std::abs(e1), 1e-12))
                ++trusted;
            else
                break;
        }
        sol.trusted = trusted;
    } else {
        sol.trusted = n;
    }

    const Eigen::MatrixXd resid =
        h * solver.eigenvectors() - solver.eigenvectors() * solver.eigenvalues().asDiagonal();
    double worst = 0.0;
    for (int k = 0; k < sol.trusted; ++k) worst = std::max(worst, resid.col(k).norm());
    sol.max_residual = worst;
    if (worst > 1e-8)
        throw Error(errc::internal, "diagonalize: eigenpair residual above 1e-8");
    return sol;
}

namespace {

std::vector<Complex> expand_in_basis(const EigenSolution& solution,
                                     const std::vector<Complex>& psi0, const XGrid& grid,
                                     double* captured) {
    const int n = solution.basis.n_basis;
    const double h = grid.spacing();
    std::vector<Complex> c(n, Complex(0.0));
    std::vector<Complex> work(grid.count);
    for (int k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < grid.count; ++i)
            work[i] = solution.basis.phi(k, grid.at(i)) * psi0[i];
        c[k - 1] = simpson_sampled(work, h);
    }
    double norm2 = 0.0;
    for (const auto& ck : c) norm2 += std::norm(ck);
    std::vector<double> dens(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) dens[i] = std::norm(psi0[i]);
    const double total = simpson_sampled(dens, h);
    if (captured) *captured = norm2 / total;
    if (norm2 < (1.0 - 1e-8) * total)
        throw Error(errc::leakage, "evolve_exact: basis expansion loses norm");
    return c;
}

} // namespace

EvolveResult evolve_exact(const EigenSolution& solution, const std::vector<Complex>& psi0,
                          const XGrid& grid, double t, double hbar) {
    ExactEvolver evolver(solution, grid, hbar);
    return evolver.evolve(psi0, t);
}

ExactEvolver::ExactEvolver(const EigenSolution& solution, const XGrid& grid, double hbar)
    : solution_(solution), grid_(grid), hbar_(hbar) {
    const int n = solution.basis.n_basis;
    eigen_on_grid_.resize(n);
    // Psi_k(x) = sum_n U_nk phi_n(x); build phi on grid once
    std::vector<std::vector<double>> phi_on_grid(n, std::vector<double>(grid.count));
    for (int k = 1; k <= n; ++k)
        for (std::size_t i = 0; i < grid.count; ++i)
            phi_on_grid[k - 1][i] = solution.basis.phi(k, grid.at(i));
    for (int k = 0; k < n; ++k) {
        eigen_on_grid_[k].assign(grid.count, 0.0);
        for (int j = 0; j < n; ++j) {
            const double u = solution.vectors[k][j];
            if (u == 0.0) continue;
            for (std::size_t i = 0; i < grid.count; ++i)
                eigen_on_grid_[k][i] += u * phi_on_grid[j][i];
        }
    }
}

EvolveResult ExactEvolver::evolve(const std::vector<Complex>& psi0, double t) const {
    if (psi0.size() != grid_.count)
        throw Error(errc::invalid_argument, "evolve: grid/sample mismatch");
    double captured = 0.0;
    const auto c = expand_in_basis(solution_, psi0, grid_, &captured);
    const int n = solution_.basis.n_basis;
    // coefficients in the eigenbasis
    std::vector<Complex> d(n, Complex(0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) d[k] += solution_.vectors[k][j] * c[j];

    EvolveResult out;
    out.captured = captured;
    out.psi.assign(grid_.count, Complex(0.0));
    for (int k = 0; k < n; ++k) {
        const Complex amp = d[k] * std::exp(-I_UNIT * solution_.energies[k] * t / hbar_);
        if (std::abs(amp) < 1e-16) continue;
        for (std::size_t i = 0; i < grid_.count; ++i)
            out.psi[i] += amp * eigen_on_grid_[k][i];
    }
    return out;
}

std::vector<double> husimi_exact(const EigenSolution& solution, int level,
                                 const PhaseSpaceGrid& psgrid, const CoherentParams& cp,
                                 std::size_t x_resolution, int threads) {
    (void)threads;
    const XGrid xg{-solution.basis.L, solution.basis.L, x_resolution};
    const auto wave = solution.eigenfunction(level, xg);
    std::vector<Complex> psi(wave.begin(), wave.end());

    std::vector<double> density(psgrid.nq * psgrid.np, 0.0);
    for (std::size_t iq = 0; iq < psgrid.nq; ++iq) {
        const double q = psgrid.q_min + double(iq) * psgrid.dq();
        for (std::size_t ip = 0; ip < psgrid.np; ++ip) {
            const double p = psgrid.p_min + double(ip) * psgrid.dp();
            const Complex amp = bargmann_transform(psi, xg, {q, p}, cp);
            density[iq * psgrid.np + ip] = std::norm(amp);
        }
    }
    return density;
}

} // namespace sqdyn
