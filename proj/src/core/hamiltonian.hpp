#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace sqdyn {

// Q-symbol (Smoothed, pairs with +I), Weyl symbol (no I term), and
// P-symbol (Antismoothed, pairs with -I). Smoothness decreases in the
// order Smoothed, Weyl, Antismoothed.
enum class SymbolKind { Weyl, Smoothed, Antismoothed };

const char* symbol_name(SymbolKind kind);

struct LocalDerivatives {
    Complex h;
    Complex h_q;
    Complex h_p;
    Complex h_qq;
    Complex h_pp;
    Complex h_qp; // zero for all separable families here

    // d2H/du dv = b^2/2 H_qq + c^2/2 H_pp
    Complex h_uv(const CoherentParams& cp) const {
        return 0.5 * cp.b * cp.b * h_qq + 0.5 * cp.c * cp.c * h_pp;
    }
};

// Gaussian smoothing of a polynomial: coefficients of E[poly(x + xi)] with
// xi ~ N(0, variance). Negative variance applies the inverse (antismoothing)
// map, which is well defined on polynomials.
std::vector<double> smooth_polynomial(const std::vector<double>& coeffs, double variance);

// Row of the monomial table in scaled units (variance 1/4): smoothing of x^n.
// Degree capped at 12.
std::vector<double> smooth_monomial(int n);

// Antismoothing of x^n in the same scaled units (variance -1/4).
std::vector<double> antismooth_monomial(int n);

struct ExpTerm {
    double amplitude;
    double rate; // amplitude * exp(rate * q)
};

// A 1D Hamiltonian p^2/2m + V(q) exposing all three symbols with
// derivatives to second order, valid at complex (q, p) by analytic
// continuation of the closed forms.
class HamiltonianModel {
  public:
    enum class Family { Harmonic, Polynomial, ExponentialSum };

    static HamiltonianModel harmonic(double mass, double omega, const CoherentParams& cp);
    static HamiltonianModel polynomial(double mass, std::vector<double> coeffs,
                                       const CoherentParams& cp);
    static HamiltonianModel exponential_sum(double mass, std::vector<ExpTerm> terms,
                                            const CoherentParams& cp);
    // Closed box with exponential walls at +/-A:
    // H_W = p^2/2m + 2 V0 e^{-alpha A} cosh(alpha x).
    static HamiltonianModel barrier(double v0, double alpha, double a, double mass,
                                    const CoherentParams& cp);

    LocalDerivatives eval(SymbolKind kind, Complex q, Complex p) const;

    // Potential part of the requested symbol at real q (no kinetic shift).
    double potential(SymbolKind kind, double q) const;
    double potential_derivative(SymbolKind kind, double q) const;
    // Constant the smoothing adds to p^2/2m: +c^2/4m, 0, -c^2/4m.
    double kinetic_shift(SymbolKind kind) const;

    double mass() const { return mass_; }
    const CoherentParams& params() const { return cp_; }
    Family family() const { return family_; }
    double omega() const { return omega_; }
    const std::vector<double>& weyl_coefficients() const { return coeffs_[0]; }

    std::string describe() const;

  private:
    HamiltonianModel() = default;

    Family family_ = Family::Polynomial;
    double mass_ = 1.0;
    double omega_ = 0.0; // harmonic family only
    CoherentParams cp_{};
    // index 0: Weyl, 1: Smoothed, 2: Antismoothed
    std::vector<double> coeffs_[3];
    std::vector<ExpTerm> terms_[3];

    static int kind_index(SymbolKind kind);
};

} // namespace sqdyn
