#include "hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace sqdyn {

namespace {
constexpr int kMaxDegree = 12;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

double double_factorial_odd(int j) { // (2j-1)!!
    double r = 1.0;
    for (int i = 2 * j - 1; i > 1; i -= 2) r *= i;
    return r;
}
} // namespace

const char* symbol_name(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Weyl: return "weyl";
        case SymbolKind::Smoothed: return "smoothed";
        case SymbolKind::Antismoothed: return "antismoothed";
    }
    return "?";
}

std::vector<double> smooth_polynomial(const std::vector<double>& coeffs, double variance) {
    if (int(coeffs.size()) > kMaxDegree + 1)
        throw Error(errc::degree_too_high, "smooth_polynomial: degree exceeds 12");
    std::vector<double> out(coeffs.size(), 0.0);
    for (int n = 0; n < int(coeffs.size()); ++n) {
        if (coeffs[n] == 0.0) continue;
        for (int j = 0; 2 * j <= n; ++j) {
            const double moment = double_factorial_odd(j) * std::pow(variance, j);
            out[n - 2 * j] += coeffs[n] * binomial(n, 2 * j) * moment;
        }
    }
    return out;
}

std::vector<double> smooth_monomial(int n) {
    if (n < 0 || n > kMaxDegree)
        throw Error(errc::degree_too_high, "smooth_monomial: degree exceeds 12");
    std::vector<double> mono(n + 1, 0.0);
    mono[n] = 1.0;
    return smooth_polynomial(mono, 0.25);
}

std::vector<double> antismooth_monomial(int n) {
    if (n < 0 || n > kMaxDegree)
        throw Error(errc::degree_too_high, "antismooth_monomial: degree exceeds 12");
    std::vector<double> mono(n + 1, 0.0);
    mono[n] = 1.0;
    return smooth_polynomial(mono, -0.25);
}

int HamiltonianModel::kind_index(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Weyl: return 0;
        case SymbolKind::Smoothed: return 1;
        case SymbolKind::Antismoothed: return 2;
    }
    throw Error(errc::unsupported_symbol, "unknown symbol kind");
}

HamiltonianModel HamiltonianModel::harmonic(double mass, double omega,
                                            const CoherentParams& cp) {
    if (!(mass > 0.0) || !(omega > 0.0))
        throw Error(errc::invalid_argument, "harmonic: mass and omega must be positive");
    HamiltonianModel m = polynomial(mass, {0.0, 0.0, 0.5 * mass * omega * omega}, cp);
    m.family_ = Family::Harmonic;
    m.omega_ = omega;
    return m;
}

HamiltonianModel HamiltonianModel::polynomial(double mass, std::vector<double> coeffs,
                                              const CoherentParams& cp) {
    if (!(mass > 0.0) || !cp.valid())
        throw Error(errc::invalid_argument, "polynomial: bad mass or coherent params");
    if (int(coeffs.size()) > kMaxDegree + 1)
        throw Error(errc::degree_too_high, "polynomial: potential degree exceeds 12");
    HamiltonianModel m;
    m.family_ = Family::Polynomial;
    m.mass_ = mass;
    m.cp_ = cp;
    const double var = 0.5 * cp.b * cp.b;
    m.coeffs_[0] = coeffs;
    m.coeffs_[1] = smooth_polynomial(coeffs, var);
    m.coeffs_[2] = smooth_polynomial(coeffs, -var);
    return m;
}

HamiltonianModel HamiltonianModel::exponential_sum(double mass, std::vector<ExpTerm> terms,
                                                   const CoherentParams& cp) {
    if (!(mass > 0.0) || !cp.valid())
        throw Error(errc::invalid_argument, "exponential_sum: bad mass or coherent params");
    HamiltonianModel m;
    m.family_ = Family::ExponentialSum;
    m.mass_ = mass;
    m.cp_ = cp;
    m.terms_[0] = terms;
    m.terms_[1] = terms;
    m.terms_[2] = terms;
    for (auto& t : m.terms_[1])
        t.amplitude *= std::exp(0.25 * t.rate * t.rate * cp.b * cp.b);
    for (auto& t : m.terms_[2])
        t.amplitude *= std::exp(-0.25 * t.rate * t.rate * cp.b * cp.b);
    return m;
}

HamiltonianModel HamiltonianModel::barrier(double v0, double alpha, double a, double mass,
                                           const CoherentParams& cp) {
    if (!(alpha > 0.0) || !(a > 0.0))
        throw Error(errc::invalid_argument, "barrier: alpha and A must be positive");
    const double amp = v0 * std::exp(-alpha * a);
    return exponential_sum(mass, {{amp, alpha}, {amp, -alpha}}, cp);
}

LocalDerivatives HamiltonianModel::eval(SymbolKind kind, Complex q, Complex p) const {
    const int k = kind_index(kind);
    LocalDerivatives d;
    d.h = p * p / (2.0 * mass_) + kinetic_shift(kind);
    d.h_p = p / mass_;
    d.h_pp = 1.0 / mass_;
    d.h_qp = 0.0;

    if (family_ == Family::ExponentialSum) {
        for (const auto& t : terms_[k]) {
            const Complex e = t.amplitude * std::exp(t.rate * q);
            d.h += e;
            d.h_q += t.rate * e;
            d.h_qq += t.rate * t.rate * e;
        }
    } else {
        const auto& c = coeffs_[k];
        Complex v = 0.0, v1 = 0.0, v2 = 0.0;
        for (int i = int(c.size()) - 1; i >= 0; --i) {
            v2 = v2 * q + 2.0 * v1;
            v1 = v1 * q + v;
            v = v * q + c[i];
        }
        d.h += v;
        d.h_q += v1;
        d.h_qq += v2;
    }
    return d;
}

double HamiltonianModel::potential(SymbolKind kind, double q) const {
    const int k = kind_index(kind);
    if (family_ == Family::ExponentialSum) {
        double v = 0.0;
        for (const auto& t : terms_[k]) v += t.amplitude * std::exp(t.rate * q);
        return v;
    }
    const auto& c = coeffs_[k];
    double v = 0.0;
    for (int i = int(c.size()) - 1; i >= 0; --i) v = v * q + c[i];
    return v;
}

double HamiltonianModel::potential_derivative(SymbolKind kind, double q) const {
    const int k = kind_index(kind);
    if (family_ == Family::ExponentialSum) {
        double v = 0.0;
        for (const auto& t : terms_[k]) v += t.rate * t.amplitude * std::exp(t.rate * q);
        return v;
    }
    const auto& c = coeffs_[k];
    double v = 0.0;
    for (int i = int(c.size()) - 1; i >= 1; --i) v = v * q + i * c[i];
    return v;
}

double HamiltonianModel::kinetic_shift(SymbolKind kind) const {
    switch (kind) {
        case SymbolKind::Weyl: return 0.0;
        case SymbolKind::Smoothed: return cp_.c * cp_.c / (4.0 * mass_);
        case SymbolKind::Antismoothed: return -cp_.c * cp_.c / (4.0 * mass_);
    }
    return 0.0;
}

std::string HamiltonianModel::describe() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Harmonic:
            os << "harmonic(mass=" << mass_ << ", omega=" << omega_ << ")";
            break;
        case Family::Polynomial: {
            os << "polynomial(mass=" << mass_ << ", coeffs=[";
            for (std::size_t i = 0; i < coeffs_[0].size(); ++i)
                os << (i ? "," : "") << coeffs_[0][i];
            os << "])";
            break;
        }
        case Family::ExponentialSum: {
            os << "exponential_sum(mass=" << mass_ << ", terms=[";
            for (std::size_t i = 0; i < terms_[0].size(); ++i)
                os << (i ? ", " : "") << terms_[0][i].amplitude << "*exp("
                   << terms_[0][i].rate << " q)";
            os << "])";
            break;
        }
    }
    return os.str();
}

} // namespace sqdyn
