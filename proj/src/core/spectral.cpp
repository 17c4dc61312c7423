#include "spectral.hpp"

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rootfind.hpp"

namespace sqdyn {

const char* rule_name(QuantizationRule rule) {
    switch (rule) {
        case QuantizationRule::SmoothedPlusI: return "smoothed+I";
        case QuantizationRule::AntismoothedMinusI: return "antismoothed-I";
        case QuantizationRule::WeylWKB: return "weyl-wkb";
    }
    return "?";
}

SymbolKind rule_symbol(QuantizationRule rule) {
    switch (rule) {
        case QuantizationRule::SmoothedPlusI: return SymbolKind::Smoothed;
        case QuantizationRule::AntismoothedMinusI: return SymbolKind::Antismoothed;
        case QuantizationRule::WeylWKB: return SymbolKind::Weyl;
    }
    return SymbolKind::Weyl;
}

double rule_sigma(QuantizationRule rule) {
    switch (rule) {
        case QuantizationRule::SmoothedPlusI: return 1.0;
        case QuantizationRule::AntismoothedMinusI: return -1.0;
        case QuantizationRule::WeylWKB: return 0.0;
    }
    return 0.0;
}

namespace {

struct TurningFrame {
    double mid;
    double half;
    double shift;
};

TurningFrame frame_of(const HamiltonianModel& model, SymbolKind kind, double energy) {
    const auto tp = turning_points(model, kind, energy);
    return TurningFrame{0.5 * (tp.first + tp.second), 0.5 * (tp.second - tp.first),
                        model.kinetic_shift(kind)};
}

// (energy - V(q(s)) - shift) / (1 - s^2), finite at the endpoints
double well_depth(const HamiltonianModel& model, SymbolKind kind, double energy,
                  const TurningFrame& fr, double s) {
    const double q = fr.mid + fr.half * s;
    const double val = energy - fr.shift - model.potential(kind, q);
    return val / ((1.0 - s) * (1.0 + s));
}

} // namespace

double reduced_action(const HamiltonianModel& model, SymbolKind kind, double energy) {
    const auto fr = frame_of(model, kind, energy);
    static const auto rule = gauss_chebyshev2(96);
    const double m = model.mass();
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double g = std::max(well_depth(model, kind, energy, fr, rule.nodes[i]), 0.0);
        acc += rule.weights[i] * std::sqrt(2.0 * m * g);
    }
    return 2.0 * fr.half * acc;
}

double orbit_period(const HamiltonianModel& model, SymbolKind kind, double energy) {
    const auto fr = frame_of(model, kind, energy);
    static const auto rule = gauss_chebyshev1(96);
    const double m = model.mass();
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double g = std::max(well_depth(model, kind, energy, fr, rule.nodes[i]), 1e-300);
        acc += rule.weights[i] * m / std::sqrt(2.0 * m * g);
    }
    return 2.0 * fr.half * acc;
}

std::vector<SemiclassicalLevel> quantize(const HamiltonianModel& model,
                                         QuantizationRule rule, int m_min, int m_max,
                                         const QuantizeOptions& opt) {
    if (m_min < 0 || m_max < m_min)
        throw Error(errc::invalid_argument, "quantize: bad level range");
    const SymbolKind kind = rule_symbol(rule);
    const double sigma = rule_sigma(rule);
    const double h = 2.0 * M_PI * model.params().hbar;

    const double q_min = potential_minimum(model, kind);
    const double e_min = model.potential(kind, q_min) + model.kinetic_shift(kind);

    // I(E) by time-domain quadrature along the periodic orbit
    auto iterm_of = [&](double e) {
        return find_periodic_orbit(model, kind, e, false).iterm;
    };
    auto F = [&](double e, int m) {
        return reduced_action(model, kind, e) + sigma * iterm_of(e) -
               (double(m) + 0.5) * h;
    };

    std::vector<SemiclassicalLevel> levels;
    const double ftol = opt.tolerance_scale * h;
    // bracket expansion needs a strictly-inside starting point
    const double probe = e_min + std::max(1e-9, 1e-9 * std::abs(e_min));
    for (int m = m_min; m <= m_max; ++m) {
        // expand the upper bracket from the previous root (or the well bottom)
        const double lo = levels.empty() ? probe : std::max(levels.back().energy, probe);
        const double f_lo = F(lo, m);
        if (f_lo > 0.0) {
            // The I term at the well bottom can exceed (m + 1/2) h when the
            // width is not matched to the local curvature; the level then has
            // no real orbit. At the matched width the root pinches exactly
            // onto the bottom.
            if (levels.empty() && f_lo <= 1e-6 * h) {
                const auto orbit = find_periodic_orbit(model, kind, lo, true);
                SemiclassicalLevel lvl;
                lvl.m = m;
                lvl.energy = lo;
                lvl.action = reduced_action(model, kind, lo);
                lvl.iterm = orbit.iterm;
                lvl.period = orbit.period;
                lvl.dI_dE = orbit.dI_dE;
                lvl.dT_dE = orbit.dT_dE;
                levels.push_back(lvl);
                continue;
            }
            throw Error(errc::no_bracket,
                        "quantize: level sits below the lowest real orbit of the symbol");
        }
        double hi = (lo > e_min + 1.0) ? lo * 2.0 : lo + std::max(1.0, std::abs(lo));
        int guard = 0;
        while (F(hi, m) < 0.0) {
            hi = (hi > 1.0) ? hi * 2.0 : hi + 1.0;
            if (hi > opt.energy_cap || ++guard > 60)
                throw Error(errc::no_bracket,
                            "quantize: level exceeds the well capacity");
        }
        // bisection seed, then Newton with dS/dE = T
        double e = bisect([&](double x) { return F(x, m); }, lo, hi, 1e-10);
        for (int it = 0; it < 80; ++it) {
            const double f = F(e, m);
            if (std::abs(f) < ftol) break;
            const double T = orbit_period(model, kind, e);
            const double step = f / T;
            double e_next = e - step;
            if (e_next <= e_min) e_next = 0.5 * (e + e_min);
            e = e_next;
        }

        SemiclassicalLevel lvl;
        lvl.m = m;
        lvl.energy = e;
        lvl.action = reduced_action(model, kind, e);
        const auto orbit = find_periodic_orbit(model, kind, e, true);
        lvl.iterm = orbit.iterm;
        lvl.period = orbit.period;
        lvl.dI_dE = orbit.dI_dE;
        lvl.dT_dE = orbit.dT_dE;
        levels.push_back(lvl);
    }
    return levels;
}

double husimi_semiclassical_at(const HamiltonianModel& model, QuantizationRule rule,
                               const SemiclassicalLevel& level, const PhasePoint& pt) {
    const SymbolKind kind = rule_symbol(rule);
    const double sigma = rule_sigma(rule);
    const CoherentParams& cp = model.params();
    const auto d = model.eval(kind, Complex(pt.q), Complex(pt.p));
    const double qdot = d.h_p.real();
    const double pdot = -d.h_q.real();
    const double zdot2 =
        0.5 * (qdot * qdot / (cp.b * cp.b) + pdot * pdot / (cp.c * cp.c));
    const double zdot = std::sqrt(zdot2);
    if (zdot < 1e-12) return std::nan("");

    const double script_e = d.h.real();
    double arg = level.energy - script_e;
    if (sigma != 0.0) {
        const double eps =
            0.25 * cp.b * cp.b * d.h_qq.real() + 0.25 * cp.c * cp.c * d.h_pp.real();
        arg += sigma * eps;
    }
    const double denom = level.period + sigma * level.dI_dE;
    const double pref = std::sqrt(2.0 * M_PI) / (zdot * denom);
    return pref * std::exp(-arg * arg / (2.0 * cp.hbar * cp.hbar * zdot2));
}

HusimiGrid husimi_semiclassical(const HamiltonianModel& model, QuantizationRule rule,
                                const SemiclassicalLevel& level,
                                const PhaseSpaceGrid& psgrid) {
    HusimiGrid out;
    out.grid = psgrid;
    out.level = level.m;
    out.rule = rule;
    out.density.assign(psgrid.nq * psgrid.np, 0.0);
    for (std::size_t iq = 0; iq < psgrid.nq; ++iq) {
        const double q = psgrid.q_min + double(iq) * psgrid.dq();
        for (std::size_t ip = 0; ip < psgrid.np; ++ip) {
            const double p = psgrid.p_min + double(ip) * psgrid.dp();
            out.density[iq * psgrid.np + ip] =
                husimi_semiclassical_at(model, rule, level, {q, p});
        }
    }
    return out;
}

GreensResult greens_function(const HamiltonianModel& model, QuantizationRule rule,
                             const PhasePoint& pt, double energy, double gamma) {
    if (!(gamma > 0.0))
        throw Error(errc::invalid_argument, "greens_function: gamma must be positive");
    const SymbolKind kind = rule_symbol(rule);
    const double sigma = rule_sigma(rule);
    const CoherentParams& cp = model.params();

    // S and I at E + i gamma by first-order continuation
    const double s_re = reduced_action(model, kind, energy);
    const double period = orbit_period(model, kind, energy);
    const auto orbit = find_periodic_orbit(model, kind, energy, true);
    const Complex s_cont = s_re + I_UNIT * gamma * period;
    const Complex i_cont = orbit.iterm + I_UNIT * gamma * orbit.dI_dE;
    const Complex phi =
        (s_cont + sigma * i_cont - M_PI * cp.hbar) / cp.hbar;

    const auto d = model.eval(kind, Complex(pt.q), Complex(pt.p));
    const double qdot = d.h_p.real();
    const double pdot = -d.h_q.real();
    const double zdot2 =
        0.5 * (qdot * qdot / (cp.b * cp.b) + pdot * pdot / (cp.c * cp.c));
    const double zdot = std::sqrt(zdot2);
    if (zdot < 1e-12)
        throw Error(errc::stationary_point, "greens_function: |zdot| vanishes at z");

    Complex arg = energy - d.h.real() + I_UNIT * gamma;
    if (sigma != 0.0) {
        const double eps =
            0.25 * cp.b * cp.b * d.h_qq.real() + 0.25 * cp.c * cp.c * d.h_pp.real();
        arg += sigma * eps;
    }

    const Complex eiphi = std::exp(I_UNIT * phi);
    GreensResult res;
    res.pole_proximity = std::abs(1.0 - eiphi) < 1e-8;
    res.value = -I_UNIT / cp.hbar * std::sqrt(2.0 * M_PI) / zdot * eiphi /
                (1.0 - eiphi) *
                std::exp(-arg * arg / (2.0 * cp.hbar * cp.hbar * zdot2));
    return res;
}

double ho_reference(int m, double z_abs2, HoReference which) {
    if (m < 0) throw Error(errc::invalid_argument, "ho_reference: m must be >= 0");
    switch (which) {
        case HoReference::Exact: {
            // e^{-|z|^2} |z|^{2m} / m!
            if (z_abs2 == 0.0) return (m == 0) ? 1.0 : 0.0;
            return std::exp(m * std::log(z_abs2) - z_abs2 - std::lgamma(m + 1.0));
        }
        case HoReference::SemiclassicalFull: {
            const double mh = m + 0.5;
            if (z_abs2 == 0.0) return 0.0;
            return std::exp(mh - z_abs2 + m * std::log(z_abs2 / mh)) /
                   std::sqrt(2.0 * M_PI * mh);
        }
        case HoReference::SemiclassicalExpanded: {
            if (z_abs2 <= 0.0) return 0.0;
            const double d = z_abs2 - m - 0.5;
            return std::exp(-d * d / (2.0 * z_abs2)) /
                   (std::sqrt(2.0 * M_PI * z_abs2));
        }
    }
    return 0.0;
}

} // namespace sqdyn
