#pragma once

// Reference values computed independently of the library code under test:
// closed-form kernels, brute-force quadratures, and analytic special cases.

#include <functional>
#include <random>
#include <vector>

#include "core/classical.hpp"
#include "core/types.hpp"

namespace oracles {

using sqdyn::Complex;

// Exact free evolution of the coherent packet <x|z'>.
Complex free_packet(double qp, double pp, double b, double hbar, double mass, double x,
                    double t);

// Exact free-particle kernel <x''| e^{-i p^2 t / 2 m hbar} |x'>.
Complex free_kernel(double x2, double x1, double t, double mass, double hbar);

// Exact harmonic-oscillator evolution of a coherent state for b = sqrt(hbar/(m w)).
Complex ho_coherent(double qp, double pp, double omega, double b, double hbar, double mass,
                    double x, double t);

// Harmonic-oscillator eigenfunction, b = sqrt(hbar/(m w)).
double ho_eigenfunction(int n, double x, double b);

// Period and reduced action of a 1D well by quadrature between turning
// points, with the sine substitution absorbing the inverse-sqrt singularity.
double period_quadrature(const std::function<double(double)>& potential, double mass,
                         double energy, double q_minus, double q_plus);
double action_quadrature(const std::function<double(double)>& potential, double mass,
                         double energy, double q_minus, double q_plus);

// Gaussian smoothing of a potential by quadrature: the position density of
// |<x|z>|^2 has variance b^2/2.
double smoothed_potential(const std::function<double(double)>& potential, double q,
                          double b);

// <z|H|z> by quadrature against the coherent wavefunction, with the kinetic
// term applied as an analytic second derivative of the Gaussian.
double expectation_H(const std::function<double(double)>& potential, double qp, double pp,
                     double b, double hbar, double mass);

// Oscillatory integrals for the quartic-phase stationary point, computed on
// the rotated contour x = e^{i pi/4} s where the integrand decays.
Complex oscillatory_quartic(double hbar); // integral of exp(i (x^2 + x^4)/hbar)

// integral of (1 + x^2) exp(i x^2 / hbar): exact Gaussian moments.
Complex oscillatory_gaussian_moment(double hbar);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Random symplectic 2x2 matrices (det = 1), rotation * squeeze * shear.
sqdyn::TangentMatrix random_symplectic(std::mt19937& rng);

} // namespace oracles
