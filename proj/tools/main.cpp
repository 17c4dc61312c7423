#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <sqdyn.h>

#include "config.hpp"
#include "table.hpp"

namespace fs = std::filesystem;
using sqdyn_cli::Config;
using sqdyn_cli::ConfigError;
using sqdyn_cli::fmt17;
using sqdyn_cli::Table;

namespace {

struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Out {
    fs::path dir;
    bool json = false;
    int threads = 1;
};

void check(sqdyn_status status, const std::string& context) {
    if (status != SQDYN_OK)
        throw ComputeError(context + ": " + sqdyn_last_error());
}

std::complex<double> cx(sqdyn_complex c) { return {c.re, c.im}; }

struct Model {
    sqdyn_model* ptr = nullptr;
    ~Model() { sqdyn_model_free(ptr); }
    Model() = default;
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
};

struct Spectrum {
    sqdyn_spectrum* ptr = nullptr;
    ~Spectrum() { sqdyn_spectrum_free(ptr); }
    Spectrum() = default;
    Spectrum(const Spectrum&) = delete;
    Spectrum& operator=(const Spectrum&) = delete;
};

void build_model(const Config& cfg, Model& model) {
    const std::string family = cfg.text("model.family");
    const double b = cfg.number("coherent.b");
    const double hbar = cfg.number("coherent.hbar");
    const double mass = cfg.number_or("model.mass", 1.0);
    sqdyn_status st;
    if (family == "harmonic") {
        st = sqdyn_model_create_harmonic(mass, cfg.number("model.omega"), b, hbar,
                                         &model.ptr);
    } else if (family == "polynomial") {
        const auto coeffs = cfg.numbers("model.coeffs");
        st = sqdyn_model_create_polynomial(mass, coeffs.data(), coeffs.size(), b, hbar,
                                           &model.ptr);
    } else if (family == "barrier") {
        st = sqdyn_model_create_barrier(cfg.number("model.V0"), cfg.number("model.alpha"),
                                        cfg.number("model.A"), mass, b, hbar, &model.ptr);
    } else if (family == "free") {
        st = sqdyn_model_create_polynomial(mass, nullptr, 0, b, hbar, &model.ptr);
    } else {
        throw ConfigError("model.family must be harmonic, polynomial, barrier, or free");
    }
    check(st, "model construction");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = a + (b - a) * double(i) / double(n - 1);
    return xs;
}

std::vector<double> make_xgrid(const Config& cfg, double fallback_half_width) {
    const double lo = cfg.number_or("xgrid.min", -fallback_half_width);
    const double hi = cfg.number_or("xgrid.max", fallback_half_width);
    const std::size_t n = std::size_t(cfg.number_or("xgrid.count", 1024));
    if (!(hi > lo) || n < 8) throw ConfigError("xgrid: need min < max and count >= 8");
    return linspace(lo, hi, n);
}

double norm_squared(const std::vector<sqdyn_complex>& psi, double h) {
    // composite Simpson over the sampled density
    const std::size_t n = psi.size();
    const std::size_t odd = (n % 2 == 1) ? n : n - 1;
    double acc = std::norm(cx(psi[0])) + std::norm(cx(psi[odd - 1]));
    for (std::size_t i = 1; i + 1 < odd; i += 2) acc += 4.0 * std::norm(cx(psi[i]));
    for (std::size_t i = 2; i + 1 < odd; i += 2) acc += 2.0 * std::norm(cx(psi[i]));
    double result = acc * h / 3.0;
    if (odd != n)
        result += 0.5 * h * (std::norm(cx(psi[n - 2])) + std::norm(cx(psi[n - 1])));
    return result;
}

double l2_distance(const std::vector<sqdyn_complex>& a,
                   const std::vector<sqdyn_complex>& b, double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(cx(a[i]) - cx(b[i]));
    return std::sqrt(acc * h);
}

std::vector<sqdyn_complex> read_state_file(const std::string& path,
                                           std::vector<double>& xs) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open initial state file '" + path + "'");
    std::vector<sqdyn_complex> psi;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) {
            first = false;
            continue; // header
        }
        first = false;
        std::istringstream ls(line);
        std::string cell;
        double vals[3] = {0, 0, 0};
        int k = 0;
        while (std::getline(ls, cell, ',') && k < 3) vals[k++] = std::stod(cell);
        if (k < 2) throw ConfigError("state file rows need x,re[,im]");
        xs.push_back(vals[0]);
        psi.push_back(sqdyn_complex{vals[1], vals[2]});
    }
    if (psi.size() < 8) throw ConfigError("state file has too few samples");
    return psi;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// turning points of the rule symbol at a given energy, from the C surface
std::pair<double, double> cli_turning_points(const Model& model, sqdyn_symbol symbol,
                                             double energy) {
    double shift = 0.0;
    check(sqdyn_kinetic_shift(model.ptr, symbol, &shift), "kinetic shift");
    auto f = [&](double q) {
        double v = 0.0;
        check(sqdyn_potential(model.ptr, symbol, q, &v), "potential");
        return v + shift - energy;
    };
    // locate the well bottom by scanning, then bisect outward on both sides
    double q_best = 0.0, f_best = f(0.0);
    for (double q = -8.0; q <= 8.0; q += 0.05) {
        const double v = f(q);
        if (v < f_best) {
            f_best = v;
            q_best = q;
        }
    }
    if (f_best >= 0.0) throw ComputeError("husimi: energy below the potential minimum");
    auto expand = [&](double dir) {
        double step = 0.125, prev = q_best;
        for (int it = 0; it < 120; ++it) {
            const double trial = q_best + dir * step;
            if (f(trial) > 0.0) {
                double a = std::min(prev, trial), bq = std::max(prev, trial);
                double fa = f(a);
                for (int k = 0; k < 120; ++k) {
                    const double m = 0.5 * (a + bq);
                    if (fa * f(m) <= 0.0)
                        bq = m;
                    else {
                        a = m;
                        fa = f(a);
                    }
                }
                return 0.5 * (a + bq);
            }
            prev = trial;
            step *= 2.0;
        }
        throw ComputeError("husimi: no turning point found");
    };
    return {expand(-1.0), expand(+1.0)};
}

nlohmann::json config_json(const Config& cfg) {
    nlohmann::json doc;
    for (const auto& [key, value] : cfg.entries()) {
        std::visit([&](const auto& v) { doc[key] = v; }, value);
    }
    return doc;
}

void write_manifest(const Out& out, const std::string& command, const Config& cfg,
                    double wall_seconds, const nlohmann::json& extra = {}) {
    nlohmann::json doc;
    doc["command"] = command;
    doc["tool"] = "sqdyn";
    doc["version"] = sqdyn_version();
    doc["wall_time_s"] = wall_seconds;
    doc["config"] = config_json(cfg);
    if (!extra.is_null() && !extra.empty()) doc["results"] = extra;
    std::ofstream os(out.dir / "manifest.json", std::ios::binary);
    os << doc.dump(2) << "\n";
}

sqdyn_rule rule_from_name(const std::string& name) {
    if (name == "smoothed+I" || name == "smoothed") return SQDYN_RULE_SMOOTHED_PLUS_I;
    if (name == "antismoothed-I" || name == "antismoothed")
        return SQDYN_RULE_ANTISMOOTHED_MINUS_I;
    if (name == "weyl-wkb" || name == "weyl" || name == "wkb") return SQDYN_RULE_WEYL_WKB;
    throw ConfigError("unknown rule '" + name + "'");
}

sqdyn_symbol symbol_from_name(const std::string& name) {
    if (name == "smoothed") return SQDYN_SYMBOL_SMOOTHED;
    if (name == "antismoothed") return SQDYN_SYMBOL_ANTISMOOTHED;
    if (name == "weyl") return SQDYN_SYMBOL_WEYL;
    throw ConfigError("unknown symbol '" + name + "'");
}

/* ---- commands -------------------------------------------------------- */

nlohmann::json cmd_ivr_compare(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    double b = 0, c = 0, hbar = 0;
    check(sqdyn_model_params(model.ptr, &b, &c, &hbar, nullptr), "params");

    Spectrum spec;
    const int n_basis = int(cfg.number_or("quantum.n_basis", 400));
    check(sqdyn_spectrum_solve(model.ptr, n_basis, cfg.number_or("quantum.e_max", 0.0),
                               cfg.number_or("quantum.L", 0.0),
                               cfg.flag_or("quantum.trust_check", false), &spec.ptr),
          "diagonalization");
    double box = 0.0;
    check(sqdyn_spectrum_info(spec.ptr, nullptr, nullptr, &box, nullptr), "spectrum info");

    const auto xs = make_xgrid(cfg, 0.995 * box);
    const double h = xs[1] - xs[0];
    const double q0 = cfg.number("initial.q");
    const double p0 = cfg.number("initial.p");

    std::vector<sqdyn_complex> psi0(xs.size());
    std::vector<double> file_xs;
    const bool from_file = cfg.has("initial.file");
    if (from_file) {
        auto raw = read_state_file(cfg.text("initial.file"), file_xs);
        if (file_xs.size() != xs.size() || std::abs(file_xs.front() - xs.front()) > 1e-12)
            throw ConfigError("initial.file grid must match the configured xgrid");
        psi0 = std::move(raw);
    } else {
        check(sqdyn_coherent_wavefunction(model.ptr, q0, p0, xs.data(), xs.size(),
                                          psi0.data()),
              "initial state");
    }

    const auto times = cfg.numbers("time.values");
    Table norms({"t", "norm_exact", "norm_smoothed_ivr", "norm_hk", "norm_hk_predicted",
                 "norm_heller", "spread_smoothed_ivr", "spread_hk", "l2_smoothed_ivr_exact",
                 "l2_hk_exact", "l2_heller_exact"});

    nlohmann::json summary = nlohmann::json::array();
    for (double t : times) {
        std::vector<sqdyn_complex> exact(xs.size());
        check(sqdyn_spectrum_evolve(spec.ptr, psi0.data(), xs.data(), xs.size(), t,
                                    exact.data(), nullptr),
              "exact evolution");

        std::vector<std::vector<sqdyn_complex>> amps(3,
                                                     std::vector<sqdyn_complex>(xs.size()));
        sqdyn_packet_info infos[3];
        const sqdyn_method methods[3] = {SQDYN_METHOD_SMOOTHED_IVR, SQDYN_METHOD_HERMAN_KLUK,
                                         SQDYN_METHOD_HELLER};
        for (int k = 0; k < 3; ++k) {
            if (from_file) {
                // general states travel through the phase-space quadrature
                const double qc = cfg.number_or("phase_grid.q_center", q0);
                const double pc = cfg.number_or("phase_grid.p_center", p0);
                const double qh = cfg.number_or("phase_grid.q_halfwidth", 6.0 * b);
                const double ph = cfg.number_or("phase_grid.p_halfwidth", 6.0 * c);
                const std::size_t nq = std::size_t(cfg.number_or("phase_grid.nq", 81));
                const std::size_t np = std::size_t(cfg.number_or("phase_grid.np", 81));
                check(sqdyn_propagate_state(
                          model.ptr, methods[k], psi0.data(), xs.data(), xs.size(), t,
                          qc - qh, qc + qh, nq, pc - ph, pc + ph, np, out.threads,
                          cfg.flag_or("phase_grid.verify", false), amps[k].data()),
                      "state propagation");
                sqdyn_packet_info probe{};
                check(sqdyn_mixed_packet(model.ptr, methods[k], q0, p0, t, nullptr, 0,
                                         nullptr, &probe),
                      "packet parameters");
                infos[k] = probe;
                infos[k].norm = norm_squared(amps[k], h);
            } else {
                check(sqdyn_mixed_packet(model.ptr, methods[k], q0, p0, t, xs.data(),
                                         xs.size(), amps[k].data(), &infos[k]),
                      "mixed packet");
            }
        }

        Table psi_tbl({"x", "dens_exact", "dens_smoothed_ivr", "dens_hk", "dens_heller"});
        for (std::size_t i = 0; i < xs.size(); ++i)
            psi_tbl.row({xs[i], std::norm(cx(exact[i])), std::norm(cx(amps[0][i])),
                         std::norm(cx(amps[1][i])), std::norm(cx(amps[2][i]))});
        psi_tbl.write(out.dir, "psi_t" + fmt17(t), out.json);

        double spread_smoothed_ivr = 0.0, spread_hk = 0.0;
        check(sqdyn_sampling_spread(model.ptr, SQDYN_METHOD_SMOOTHED_IVR, infos[0].m_qq,
                                    infos[0].m_qp, infos[0].m_pq, infos[0].m_pp,
                                    &spread_smoothed_ivr),
              "sampling spread");
        check(sqdyn_sampling_spread(model.ptr, SQDYN_METHOD_HERMAN_KLUK, infos[1].m_qq,
                                    infos[1].m_qp, infos[1].m_pq, infos[1].m_pp,
                                    &spread_hk),
              "sampling spread");
        const double hk_gamma2 = std::norm(cx(infos[1].gamma));
        const double hk_pred = 1.0 / std::sqrt(1.0 - hk_gamma2);
        const double l2p = l2_distance(amps[0], exact, h);
        const double l2h = l2_distance(amps[1], exact, h);
        const double l2e = l2_distance(amps[2], exact, h);
        norms.row({t, norm_squared(exact, h), infos[0].norm, infos[1].norm, hk_pred,
                   infos[2].norm, spread_smoothed_ivr, spread_hk, l2p, l2h, l2e});
        summary.push_back({{"t", t},
                           {"l2_smoothed_ivr_exact", l2p},
                           {"l2_hk_exact", l2h},
                           {"l2_heller_exact", l2e}});
    }
    norms.write(out.dir, "norms", out.json);

    if (cfg.flag_or("trajectory.dump", false)) {
        sqdyn_trajectory* traj = nullptr;
        const double t_max = *std::max_element(times.begin(), times.end());
        check(sqdyn_integrate(model.ptr, SQDYN_SYMBOL_SMOOTHED, q0, p0, t_max, &traj),
              "trajectory dump");
        Table tcsv({"t", "q", "p", "m_qq", "m_qp", "m_pq", "m_pp", "S_H", "I"});
        for (std::size_t i = 0; i < sqdyn_trajectory_size(traj); ++i) {
            sqdyn_traj_sample s{};
            check(sqdyn_trajectory_sample(traj, i, &s), "trajectory sample");
            tcsv.row({s.t, s.q, s.p, s.m_qq, s.m_qp, s.m_pq, s.m_pp, s.action, s.iterm});
        }
        sqdyn_trajectory_free(traj);
        tcsv.write(out.dir, "trajectory", out.json);
    }
    return summary;
}

nlohmann::json cmd_propagator(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    const double q1 = cfg.number("initial.q");
    const double p1 = cfg.number("initial.p");
    const double q2 = cfg.number_or("final.q", q1);
    const double p2 = cfg.number_or("final.p", p1);
    const auto symbol = symbol_from_name(cfg.text_or("propagator.symbol", "smoothed"));
    const auto times = cfg.numbers("time.values");
    const bool all_roots = cfg.flag_or("propagator.all_roots", false);

    Table tbl({"t", "root", "K_re", "K_im", "K_abs", "S_re", "S_im", "I_re", "I_im",
               "Mvv_re", "Mvv_im", "v0_re", "v0_im", "residual"});
    for (double t : times) {
        if (all_roots && t > 0.0) {
            double b = 0, c = 0;
            check(sqdyn_model_params(model.ptr, &b, &c, nullptr, nullptr), "params");
            // seeds: the principal conj(z') plus a small ring around it and conj(z'')
            const std::complex<double> zc1(q1 / b, p1 / c), zc2(q2 / b, p2 / c);
            const std::complex<double> s0 = std::conj(zc1) / std::sqrt(2.0);
            const std::complex<double> s1 = std::conj(zc2) / std::sqrt(2.0);
            std::vector<sqdyn_complex> seeds = {
                {s0.real(), s0.imag()},
                {s1.real(), s1.imag()},
                {s0.real() + 0.5, s0.imag()},
                {s0.real(), s0.imag() + 0.5},
                {s0.real() - 0.5, s0.imag() - 0.5}};
            std::vector<sqdyn_propagator_result> results(seeds.size());
            size_t count = 0;
            check(sqdyn_propagator_roots(model.ptr, symbol, q1, p1, q2, p2, t,
                                         seeds.data(), seeds.size(), results.data(),
                                         &count),
                  "propagator roots");
            for (size_t r = 0; r < count; ++r) {
                const auto& res = results[r];
                tbl.row({t, double(r), res.value.re, res.value.im,
                         std::abs(cx(res.value)), res.action.re, res.action.im,
                         res.iterm.re, res.iterm.im, res.m_vv.re, res.m_vv.im, res.v0.re,
                         res.v0.im, res.residual});
            }
        } else {
            sqdyn_propagator_result res{};
            check(sqdyn_propagator(model.ptr, symbol, q1, p1, q2, p2, t, &res),
                  "propagator");
            tbl.row({t, 0.0, res.value.re, res.value.im, std::abs(cx(res.value)),
                     res.action.re, res.action.im, res.iterm.re, res.iterm.im,
                     res.m_vv.re, res.m_vv.im, res.v0.re, res.v0.im, res.residual});
        }
    }
    tbl.write(out.dir, "propagator", out.json);
    return {};
}

nlohmann::json cmd_spectrum(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    const int m_min = int(cfg.number_or("spectrum.m_min", 0));
    const int m_max = int(cfg.number_or("spectrum.m_max", 10));
    const std::size_t count_cap = std::size_t(m_max - m_min + 1);

    struct RuleColumn {
        sqdyn_rule rule;
        int m_first = 0; // first representable level
        std::vector<sqdyn_level> levels;
        bool ok = false;
    };
    RuleColumn cols[3] = {{SQDYN_RULE_SMOOTHED_PLUS_I, m_min, {}, false},
                          {SQDYN_RULE_WEYL_WKB, m_min, {}, false},
                          {SQDYN_RULE_ANTISMOOTHED_MINUS_I, m_min, {}, false}};
    for (auto& col : cols) {
        // low levels can sit below the lowest real orbit of the rule's
        // symbol; walk up to the first representable one
        for (int m_first = m_min; m_first <= m_max; ++m_first) {
            col.levels.assign(count_cap, sqdyn_level{});
            size_t got = 0;
            const auto st = sqdyn_quantize(model.ptr, col.rule, m_first, m_max,
                                           col.levels.data(), &got);
            if (st == SQDYN_OK) {
                col.ok = true;
                col.m_first = m_first;
                col.levels.resize(got);
                break;
            }
            if (st != SQDYN_ERR_NO_BRACKET) check(st, "quantize");
        }
        if (!col.ok) col.levels.clear();
    }

    std::vector<double> exact;
    if (cfg.flag_or("spectrum.with_exact", false)) {
        Spectrum spec;
        check(sqdyn_spectrum_solve(model.ptr, int(cfg.number_or("quantum.n_basis", 0)),
                                   cfg.number_or("quantum.e_max", 0.0),
                                   cfg.number_or("quantum.L", 0.0),
                                   cfg.flag_or("quantum.trust_check", true), &spec.ptr),
              "diagonalization");
        size_t n_levels = 0;
        check(sqdyn_spectrum_info(spec.ptr, &n_levels, nullptr, nullptr, nullptr),
              "spectrum info");
        exact.resize(n_levels);
        check(sqdyn_spectrum_energies(spec.ptr, exact.data(), n_levels), "energies");
    }

    const double nan = std::nan("");
    auto level_of = [&](const RuleColumn& col, int m) -> const sqdyn_level* {
        if (!col.ok || m < col.m_first) return nullptr;
        const std::size_t i = std::size_t(m - col.m_first);
        return (i < col.levels.size()) ? &col.levels[i] : nullptr;
    };

    Table tbl({"m", "E_smoothed_plus_I", "E_wkb", "E_antismoothed_minus_I", "E_exact",
               "T", "I"});
    for (int m = m_min; m <= m_max; ++m) {
        const sqdyn_level* l1 = level_of(cols[0], m);
        const sqdyn_level* lw = level_of(cols[1], m);
        const sqdyn_level* l2 = level_of(cols[2], m);
        const double ee = (m >= 0 && std::size_t(m) < exact.size()) ? exact[m] : nan;
        const double period = l1 ? l1->period : (lw ? lw->period : nan);
        const double iterm = l1 ? l1->iterm : nan;
        tbl.row({double(m), l1 ? l1->energy : nan, lw ? lw->energy : nan,
                 l2 ? l2->energy : nan, ee, period, iterm});
    }
    tbl.write(out.dir, "spectrum", out.json);
    return {};
}

nlohmann::json cmd_husimi(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    const int m = int(cfg.number_or("husimi.m", 0));
    const std::string kind = cfg.text_or("husimi.kind", "semiclassical");
    double b = 0, c = 0;
    check(sqdyn_model_params(model.ptr, &b, &c, nullptr, nullptr), "params");

    std::size_t nq = std::size_t(cfg.number_or("phase_grid.nq", 101));
    std::size_t np = std::size_t(cfg.number_or("phase_grid.np", 101));
    double q_min, q_max, p_min, p_max;

    std::vector<double> density(nq * np);
    if (kind == "semiclassical") {
        const auto rule = rule_from_name(cfg.text_or("husimi.rule", "smoothed+I"));
        sqdyn_level level{};
        size_t got = 0;
        check(sqdyn_quantize(model.ptr, rule, m, m, &level, &got), "quantize");
        const sqdyn_symbol symbol =
            rule == SQDYN_RULE_SMOOTHED_PLUS_I
                ? SQDYN_SYMBOL_SMOOTHED
                : (rule == SQDYN_RULE_ANTISMOOTHED_MINUS_I ? SQDYN_SYMBOL_ANTISMOOTHED
                                                           : SQDYN_SYMBOL_WEYL);
        const auto tp = cli_turning_points(model, symbol, level.energy);
        const double margin = 0.35 * (tp.second - tp.first) + 2.0 * b;
        const double p_scale = std::sqrt(2.0 * cfg.number_or("model.mass", 1.0) *
                                         std::max(level.energy, 1e-12));
        q_min = cfg.number_or("phase_grid.q_min", tp.first - margin);
        q_max = cfg.number_or("phase_grid.q_max", tp.second + margin);
        p_min = cfg.number_or("phase_grid.p_min", -1.6 * p_scale - 2.0 * c);
        p_max = cfg.number_or("phase_grid.p_max", 1.6 * p_scale + 2.0 * c);
        check(sqdyn_husimi_semiclassical(model.ptr, rule, &level, q_min, q_max, nq, p_min,
                                         p_max, np, density.data()),
              "husimi");
    } else if (kind == "exact") {
        Spectrum spec;
        check(sqdyn_spectrum_solve(model.ptr, int(cfg.number_or("quantum.n_basis", 0)),
                                   cfg.number_or("quantum.e_max", 0.0),
                                   cfg.number_or("quantum.L", 0.0), 0, &spec.ptr),
              "diagonalization");
        q_min = cfg.number("phase_grid.q_min");
        q_max = cfg.number("phase_grid.q_max");
        p_min = cfg.number("phase_grid.p_min");
        p_max = cfg.number("phase_grid.p_max");
        check(sqdyn_spectrum_husimi(spec.ptr, m, q_min, q_max, nq, p_min, p_max, np,
                                    std::size_t(cfg.number_or("husimi.x_resolution", 4096)),
                                    density.data()),
              "husimi");
    } else {
        throw ConfigError("husimi.kind must be semiclassical or exact");
    }

    Table tbl({"q", "p", "rho"});
    for (std::size_t iq = 0; iq < nq; ++iq) {
        const double q = q_min + (q_max - q_min) * double(iq) / double(nq - 1);
        for (std::size_t ip = 0; ip < np; ++ip) {
            const double p = p_min + (p_max - p_min) * double(ip) / double(np - 1);
            tbl.row({q, p, density[iq * np + ip]});
        }
    }
    tbl.write(out.dir, "husimi", out.json);
    return {};
}

nlohmann::json cmd_greens(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    const auto rule = rule_from_name(cfg.text_or("greens.rule", "smoothed+I"));
    const double q = cfg.number("greens.q");
    const double p = cfg.number("greens.p");
    const double gamma = cfg.number_or("greens.gamma", 1e-3);
    const double e0 = cfg.number("greens.e_min");
    const double e1 = cfg.number("greens.e_max");
    const std::size_t n = std::size_t(cfg.number_or("greens.count", 201));

    Table tbl({"E", "G_re", "G_im", "G_abs", "pole_proximity"});
    for (std::size_t i = 0; i < n; ++i) {
        const double e = e0 + (e1 - e0) * double(i) / double(n - 1);
        sqdyn_complex g{};
        int near_pole = 0;
        check(sqdyn_greens_function(model.ptr, rule, q, p, e, gamma, &g, &near_pole),
              "greens function");
        tbl.row({e, g.re, g.im, std::abs(cx(g)), double(near_pole)});
    }
    tbl.write(out.dir, "greens", out.json);
    return {};
}

nlohmann::json cmd_exact_evolve(const Config& cfg, const Out& out) {
    Model model;
    build_model(cfg, model);
    Spectrum spec;
    check(sqdyn_spectrum_solve(model.ptr, int(cfg.number_or("quantum.n_basis", 0)),
                               cfg.number_or("quantum.e_max", 0.0),
                               cfg.number_or("quantum.L", 0.0),
                               cfg.flag_or("quantum.trust_check", true), &spec.ptr),
          "diagonalization");
    size_t n_levels = 0;
    int trusted = 0;
    double box = 0, emax = 0;
    check(sqdyn_spectrum_info(spec.ptr, &n_levels, &trusted, &box, &emax),
          "spectrum info");

    std::vector<double> energies(n_levels);
    check(sqdyn_spectrum_energies(spec.ptr, energies.data(), n_levels), "energies");
    Table ecsv({"n", "E_n", "trusted"});
    for (std::size_t i = 0; i < n_levels; ++i)
        ecsv.row({double(i), energies[i], double(i < std::size_t(trusted))});
    ecsv.write(out.dir, "eigenvalues", out.json);

    const auto xs = make_xgrid(cfg, 0.995 * box);
    const double h = xs[1] - xs[0];
    std::vector<sqdyn_complex> psi0(xs.size());
    if (cfg.has("initial.file")) {
        std::vector<double> file_xs;
        psi0 = read_state_file(cfg.text("initial.file"), file_xs);
        if (file_xs.size() != xs.size())
            throw ConfigError("initial.file grid must match the configured xgrid");
    } else {
        check(sqdyn_coherent_wavefunction(model.ptr, cfg.number("initial.q"),
                                          cfg.number("initial.p"), xs.data(), xs.size(),
                                          psi0.data()),
              "initial state");
    }

    const auto times = cfg.numbers_or("time.values", {0.0});
    Table ncsv({"t", "norm", "captured"});
    for (double t : times) {
        std::vector<sqdyn_complex> psi(xs.size());
        double captured = 0.0;
        check(sqdyn_spectrum_evolve(spec.ptr, psi0.data(), xs.data(), xs.size(), t,
                                    psi.data(), &captured),
              "evolution");
        Table pcsv({"x", "re", "im", "dens"});
        for (std::size_t i = 0; i < xs.size(); ++i)
            pcsv.row({xs[i], psi[i].re, psi[i].im, std::norm(cx(psi[i]))});
        pcsv.write(out.dir, "psi_t" + fmt17(t), out.json);
        ncsv.row({t, norm_squared(psi, h), captured});
    }
    ncsv.write(out.dir, "norms", out.json);
    nlohmann::json extra;
    extra["trusted_levels"] = trusted;
    extra["box_half_width"] = box;
    extra["e_max"] = emax;
    return extra;
}

nlohmann::json cmd_spa_demo(const Config& cfg, const Out& out) {
    // defaults: the quartic phase f = x^2 + x^4, g = 1 at x0 = 0
    const double f0 = cfg.number_or("spa.f0", 0.0);
    const double f1 = cfg.number_or("spa.f1", 0.0);
    const double f2 = cfg.number_or("spa.f2", 2.0);
    const double f3 = cfg.number_or("spa.f3", 0.0);
    const double f4 = cfg.number_or("spa.f4", 24.0);
    const double g0 = cfg.number_or("spa.g0", 1.0);
    const double g1 = cfg.number_or("spa.g1", 0.0);
    const double g2 = cfg.number_or("spa.g2", 0.0);
    const auto hbars = cfg.numbers_or("spa.hbar_values", {0.2, 0.1, 0.05, 0.025});

    Table tbl({"hbar", "A0_re", "A0_im", "R", "corrected_re", "corrected_im"});
    for (double hbar : hbars) {
        sqdyn_spa_result res{};
        check(sqdyn_spa_integrate(f0, f1, f2, f3, f4, g0, g1, g2, hbar, &res), "spa");
        tbl.row({hbar, res.a0.re, res.a0.im, res.r, res.corrected.re, res.corrected.im});
    }
    tbl.write(out.dir, "spa", out.json);
    return {};
}

nlohmann::json cmd_scaling_check(const Config& cfg, const Out& out,
                                 const std::string& which) {
    if (which != "appendix-c")
        throw ConfigError("scaling-check: unknown check '" + which +
                          "' (expected appendix-c)");
    const auto hbars =
        cfg.numbers_or("scaling.hbar_values", {0.2, 0.1, 0.05, 0.025, 0.0125});
    const double q0 = cfg.number_or("scaling.q", 1.1);
    const double p0 = cfg.number_or("scaling.p", 0.4);
    const double t = cfg.number_or("scaling.t", 1.7);
    const auto coeffs = cfg.numbers_or("model.coeffs", {0.0, 0.0, 0.0, 0.0, 0.25});

    Table tbl({"hbar", "delta"});
    std::vector<double> deltas;
    for (double hbar : hbars) {
        Model model;
        check(sqdyn_model_create_polynomial(cfg.number_or("model.mass", 1.0),
                                            coeffs.data(), coeffs.size(),
                                            std::sqrt(hbar), hbar, &model.ptr),
              "model construction");
        double delta = 0.0;
        check(sqdyn_action_gap(model.ptr, q0, p0, t, &delta), "action gap");
        deltas.push_back(delta);
        tbl.row({hbar, delta});
    }
    tbl.write(out.dir, "scaling", out.json);
    const double slope = slope_loglog(hbars, deltas);
    std::cout << "appendix-c scaling: fitted log-log slope = " << fmt17(slope) << "\n";
    nlohmann::json extra;
    extra["slope"] = slope;
    return extra;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sqdyn: 1D semiclassical quantum dynamics engine"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", format = "csv", scaling_which = "appendix-c";
    std::vector<std::string> overrides;
    int threads = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config (.toml subset or .json)");
        cmd->add_option("--set", overrides, "override config entries, key=value");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--threads", threads, "worker thread count");
        cmd->add_option("--format", format, "tabular output format: csv or json");
    };

    CLI::App* ivr = app.add_subcommand("ivr-compare",
                                       "exact vs mixed-propagator packet evolution");
    CLI::App* prop = app.add_subcommand("propagator", "coherent-state propagator K(z'',t;z')");
    CLI::App* spectrum = app.add_subcommand("spectrum", "semiclassical quantization rules");
    CLI::App* husimi = app.add_subcommand("husimi", "Husimi distributions");
    CLI::App* greens = app.add_subcommand("greens", "coherent-state Green's function sweep");
    CLI::App* evolve = app.add_subcommand("exact-evolve", "sine-basis exact evolution");
    CLI::App* spa = app.add_subcommand("spa-demo", "stationary-phase correction table");
    CLI::App* scaling = app.add_subcommand("scaling-check", "semiclassical scaling checks");
    for (CLI::App* cmd : {ivr, prop, spectrum, husimi, greens, evolve, spa, scaling})
        add_common(cmd);
    scaling->add_option("which", scaling_which, "which scaling check (appendix-c)");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
        for (const auto& ov : overrides) cfg.apply_override(ov);
        if (format != "csv" && format != "json")
            throw ConfigError("--format must be csv or json");

        Out out;
        out.dir = out_dir;
        out.json = (format == "json");
        out.threads = threads;
        fs::create_directories(out.dir);
        const auto t0 = std::chrono::steady_clock::now();
        nlohmann::json extra;
        std::string name;
        if (*ivr) {
            name = "ivr-compare";
            extra = cmd_ivr_compare(cfg, out);
        } else if (*prop) {
            name = "propagator";
            extra = cmd_propagator(cfg, out);
        } else if (*spectrum) {
            name = "spectrum";
            extra = cmd_spectrum(cfg, out);
        } else if (*husimi) {
            name = "husimi";
            extra = cmd_husimi(cfg, out);
        } else if (*greens) {
            name = "greens";
            extra = cmd_greens(cfg, out);
        } else if (*evolve) {
            name = "exact-evolve";
            extra = cmd_exact_evolve(cfg, out);
        } else if (*spa) {
            name = "spa-demo";
            extra = cmd_spa_demo(cfg, out);
        } else if (*scaling) {
            name = "scaling-check";
            extra = cmd_scaling_check(cfg, out, scaling_which);
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(out, name, cfg, wall, extra);
        return 0;
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "compute error: " << ex.what() << "\n";
        return 3;
    }
}
