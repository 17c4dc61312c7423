#pragma once

#include <memory>
#include <vector>

#include "coherent.hpp"
#include "hamiltonian.hpp"
#include "ivr.hpp"
#include "types.hpp"

namespace sqdyn {

// Sine basis on [-L, L] with hard walls: phi_n(x) = sin(n pi x / 2L + n pi / 2) / sqrt(L).
struct SpectralBasis {
    double L = 0.0;
    int n_basis = 0;
    double e_max = 0.0;

    double phi(int n, double x) const; // n = 1..n_basis
};

struct BasisSpec {
    int n_basis = 0;    // 0: derive from e_max
    double e_max = 0.0; // 0: derive from n_basis and the confinement condition
    double L_override = 0.0;
};

// L from V(L) = E_max (bisection) unless overridden; N from
// E_max = N^2 pi^2 hbar^2 / (8 m L^2).
SpectralBasis build_basis(const HamiltonianModel& model, const BasisSpec& spec);

struct EigenSolution {
    SpectralBasis basis;
    std::vector<double> energies;              // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k][n]: coefficient of phi_{n+1}
    int trusted = 0;                           // levels stable under basis enlargement
    double max_residual = 0.0;                 // max ||H v - E v|| / ||v|| over trusted levels

    // eigenfunction on a grid
    std::vector<double> eigenfunction(int level, const XGrid& grid) const;
};

// Dense symmetric diagonalization; trusted-level count from a 1.25 N re-run.
EigenSolution diagonalize(const HamiltonianModel& model, const SpectralBasis& basis,
                          bool with_trust_check = true);

struct EvolveResult {
    std::vector<Complex> psi;
    double captured = 0.0; // fraction of the norm captured by the expansion
};

// Expand psi0 in the basis, advance phases by e^{-i E_n t / hbar}, resum.
// Throws `leakage` when the expansion captures less than 1 - 1e-8 of the norm.
EvolveResult evolve_exact(const EigenSolution& solution, const std::vector<Complex>& psi0,
                          const XGrid& grid, double t, double hbar);

// Precomputes eigenfunctions on the grid for repeated evolutions.
class ExactEvolver {
  public:
    ExactEvolver(const EigenSolution& solution, const XGrid& grid, double hbar);
    EvolveResult evolve(const std::vector<Complex>& psi0, double t) const;

  private:
    const EigenSolution& solution_;
    XGrid grid_;
    double hbar_;
    std::vector<std::vector<double>> eigen_on_grid_;
};

// |<z|Psi_m>|^2 on a phase-space grid.
std::vector<double> husimi_exact(const EigenSolution& solution, int level,
                                 const PhaseSpaceGrid& psgrid, const CoherentParams& cp,
                                 std::size_t x_resolution = 4096, int threads = 1);

} // namespace sqdyn
