#pragma once

// Scenario runners: each turns validated parameters into a Report.

#include "hybridsim/coupling.hpp"
#include "hybridsim/cryo_budget.hpp"
#include "hybridsim/dynamics.hpp"
#include "hybridsim/electrostatics.hpp"
#include "hybridsim/lc_circuit.hpp"
#include "hybridsim/modulation.hpp"
#include "hybridsim/quantities.hpp"
#include "hybridsim/trap_geometry.hpp"
#include "hybridsim/workbench/config.hpp"
#include "hybridsim/workbench/report.hpp"

#include <cmath>
#include <future>
#include <string>
#include <vector>

namespace hybridsim::workbench {

namespace detail {

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string column_name(const std::string& key, Dimension d) {
    return d == Dimension::dimensionless ? key : key + "_" + std::string(unit_suffix(d));
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

} // namespace detail

inline Report run_geometry(const Params& p) {
    Report r;
    r.scenario = "geometry";
    const double a = p.require_quantity("a", Dimension::metre);
    const auto opt = trap::optimum_widths(a);
    const bool b_given = p.has("b");
    const double b = p.quantity("b", Dimension::metre, opt.b);
    const double c = p.quantity("c", Dimension::metre, b / 2.0);
    const double w_outer = p.quantity("w_outer", Dimension::metre, opt.w_outer);
    const auto g = trap::TrapGeometry::make(a, b, c, w_outer);
    const double h = g.height();

    r.add_column("a_m", plumbing);
    r.add_column("b_m", b_given ? plumbing : "b = 4.90 a");
    r.add_column("c_m", p.has("c") ? plumbing : "c = b / 2");
    r.add_column("w_outer_m", p.has("w_outer") ? plumbing : "w_outer = 3.66 a");
    r.add_column("h_m", "h = sqrt(a b c (a + b + c)) / (b + c)");
    r.add_column("h_over_a", "h / a");
    r.add_column("asymmetric", "b != c");
    r.add_column("optimum_ratios", "b = 4.90 a, c = b / 2 within 3%");
    std::vector<Cell> row{a, b, c, w_outer, h, h / a, detail::yes_no(g.asymmetric()),
                          detail::yes_no(trap::matches_optimum_ratios(a, b, c))};

    const auto gamma = p.number("gamma");
    const auto beta = p.number("beta_quartic");
    if (gamma || beta) {
        const trap::AxialPotential ap{gamma.value_or(0.0), beta.value_or(0.0)};
        const double z = p.quantity("z", Dimension::metre, 0.0);
        r.add_column("z_m", plumbing);
        r.add_column("axial_potential_J", "V = 2 e gamma z^2 + 2 e beta z^4");
        r.add_column("separation_wedge", "gamma < 0 and beta > 0");
        row.insert(row.end(), {z, trap::axial_potential(z, ap), detail::yes_no(ap.is_separation_wedge())});
    }
    if (const auto rate0 = p.quantity("rate0", Dimension::hertz)) {
        const double r0 = p.require_quantity("r0", Dimension::metre);
        const double r1 = p.quantity("r1", Dimension::metre, h);
        const double exponent = p.number("heating_exponent", trap::heating_exponent);
        r.add_column("r1_m", p.has("r1") ? plumbing : "r1 = h");
        r.add_column("heating_rate_per_s", "rate0 (r0 / r1)^3.5");
        row.insert(row.end(), {r1, trap::heating_rate_scaled(*rate0, r0, r1, exponent)});
    }
    r.add_row(std::move(row));
    r.summary.emplace_back("ion_height_m", h);
    r.summary.emplace_back("height_over_a", h / a);
    return r;
}

inline Report run_circuit(const Params& p) {
    Report r;
    r.scenario = "circuit";
    const double C0 = p.require_quantity("C0", Dimension::farad);
    const double L0 = p.require_quantity("L0", Dimension::henry);
    const auto forced = p.quantity("Z", Dimension::ohm);
    const auto c = circuit::derive_circuit(C0, L0, forced);

    r.add_column("C0_F", plumbing);
    r.add_column("L0_H", plumbing);
    r.add_column("f_r_Hz", "omega_r = 1 / sqrt(L0 C0)");
    r.add_column("Z_natural_ohm", "Z = sqrt(L0 / C0)");
    r.add_column("Z_used_ohm", forced ? plumbing : "Z = sqrt(L0 / C0)");
    r.add_column("dq0_C", "dq0 = sqrt(hbar / 2Z)");
    r.add_column("dphi0_Wb", "dphi0 = sqrt(hbar Z / 2)");
    r.add_column("dq0_dphi0_over_hbar", "dq0 dphi0 / hbar = 1/2");
    std::vector<Cell> row{C0, L0, c.frequency_hz(), c.natural_impedance(), c.Z, c.dq0, c.dphi0,
                          c.dq0 * c.dphi0 / constants::hbar};

    if (const auto Z0 = p.quantity("stub_Z0", Dimension::ohm)) {
        const double len = p.require_quantity("stub_length", Dimension::metre);
        const double lambda = p.require_quantity("stub_wavelength", Dimension::metre);
        const auto term = p.choice("stub_termination", {"short", "open"}, "short") == "short"
                              ? circuit::StubTermination::short_circuit
                              : circuit::StubTermination::open_circuit;
        const auto s = circuit::stub_reactance(*Z0, len, lambda, term);
        r.add_column("stub_X_ohm", term == circuit::StubTermination::short_circuit ? "X = Z0 tan(2 pi l / lambda)"
                                                                                   : "X = -Z0 cot(2 pi l / lambda)");
        r.add_column("stub_character", "sign of X; |tan| > 1e8 or < 1e-8 is resonant");
        row.insert(row.end(), {s.reactance, std::string(circuit::to_string(s.character))});
    }
    if (p.boolean("idc", false)) {
        circuit::InterdigitalGeometry g;
        g.n_fingers = p.small_integer("idc_fingers", g.n_fingers);
        g.finger_length = p.quantity("idc_finger_length", Dimension::metre, g.finger_length);
        g.finger_width = p.quantity("idc_finger_width", Dimension::metre, g.finger_width);
        g.finger_thickness = p.quantity("idc_thickness", Dimension::metre, g.finger_thickness);
        g.gap = p.quantity("idc_gap", Dimension::metre, g.gap);
        g.eps_eff = p.number("idc_eps_eff", g.eps_eff);
        g.n_parallel = p.small_integer("idc_parallel", g.n_parallel);
        r.add_column("idc_estimate_F", "C = n_par (N - 1) eps0 eps_eff t l / gap");
        row.emplace_back(circuit::interdigital_capacitance_estimate(g));
        r.summary.emplace_back("idc_fidelity", std::string("low: parallel-edge estimate, no fringe fields"));
    }
    r.add_row(std::move(row));
    r.summary.emplace_back("resonance_Hz", c.frequency_hz());
    r.summary.emplace_back("dq0_C", c.dq0);
    r.summary.emplace_back("dphi0_Wb", c.dphi0);
    return r;
}

inline Report run_plates(const Params& p) {
    Report r;
    r.scenario = "plates";
    electrostatics::PlatePair pp;
    pp.plate_length = p.quantity("plate_length", Dimension::metre, pp.plate_length);
    pp.plate_width = p.quantity("plate_width", Dimension::metre, pp.plate_width);
    pp.charge = p.quantity("charge", Dimension::coulomb, pp.charge);
    pp.grid_resolution = p.small_integer("grid_resolution", pp.grid_resolution);
    pp.center_separation = p.quantity("center_separation", Dimension::metre, pp.center_separation);
    const double h = p.quantity("ion_height", Dimension::metre, 25e-6);
    const std::string field_formula = "E_x = sum_i k q_i (x - x_i) / |r - r_i|^3 over plate grid charges";

    if (p.choice("table", {"separation", "length"}, "separation") == "separation") {
        const double lo = p.quantity("sep_min", Dimension::metre, pp.plate_length);
        const double hi = p.quantity("sep_max", Dimension::metre, 60e-6);
        const int n = p.small_integer("n_points", 45);
        const auto opt = electrostatics::optimum_plate_separation(pp, h, lo, hi);
        r.add_column("separation_m", plumbing);
        r.add_column("field_V_per_m", field_formula);
        r.add_column("field_rel", "|E_x| / max |E_x|");
        for (const auto& pt : electrostatics::separation_sweep(pp, h, lo, hi, n)) {
            r.add_row({pt.separation, pt.field, pt.field_rel});
        }
        r.summary.emplace_back("optimum_separation_m", opt.separation);
        r.summary.emplace_back("optimum_field_V_per_m", opt.field);
        r.summary.emplace_back("unimodal", detail::yes_no(opt.unimodal));
        r.summary.emplace_back("point_charge_optimum_m", std::sqrt(2.0) * h);
        r.plot = {"separation_m", "field_rel", "", false, false};
    } else {
        const double lo = p.quantity("length_min", Dimension::metre, 2e-6);
        const double hi = p.quantity("length_max", Dimension::metre, pp.center_separation);
        const int n = p.small_integer("n_lengths", 12);
        if (n < 1) throw DomainError("n_lengths must be >= 1");
        const auto lengths = detail::linspace(lo, hi, n);
        const auto curve = electrostatics::field_vs_plate_length(pp, h, lengths);
        r.add_column("plate_length_m", plumbing);
        r.add_column("field_V_per_m", field_formula + ", fixed surface charge density");
        for (std::size_t i = 0; i < curve.lengths.size(); ++i) r.add_row({curve.lengths[i], curve.fields[i]});
        if (curve.fit) {
            r.summary.emplace_back("fit_slope_V_per_m2", curve.fit->slope);
            r.summary.emplace_back("fit_intercept_V_per_m", curve.fit->intercept);
        } else {
            r.summary.emplace_back("fit", std::string("degenerate"));
        }
        r.plot = {"plate_length_m", "field_V_per_m", "", false, false};
    }
    return r;
}

inline Report run_modulation(const Params& p) {
    Report r;
    r.scenario = "modulation";
    modulation::ModulationSpec s;
    s.C0 = p.quantity("C0", Dimension::farad, s.C0);
    s.alpha = p.quantity("alpha", Dimension::metre, s.alpha);
    if (p.has("beta_amp")) {
        s.beta_amp = p.require_quantity("beta_amp", Dimension::metre);
    } else if (const auto eta = p.number("eta")) {
        s.beta_amp = *eta * s.alpha;
    }
    s.nu = two_pi * p.quantity("f_mod", Dimension::hertz, s.nu / two_pi);
    s.scheme = p.choice("scheme", {"single", "paired"}, "paired") == "single" ? modulation::Scheme::single
                                                                             : modulation::Scheme::paired;
    s.validate();
    const double fm_index = p.number("fm_index", 0.3);

    const std::string table = p.choice("table", {"waveform", "harmonics", "sidebands"}, "harmonics");
    if (table == "waveform") {
        const int n = p.small_integer("n_waveform", 200);
        if (n < 2) throw DomainError("n_waveform must be >= 2");
        r.add_column("t_s", plumbing);
        r.add_column("C_F", s.scheme == modulation::Scheme::single
                                ? "C = C0 alpha / (alpha + beta sin(nu t))"
                                : "C = (C0/2) [alpha / (alpha + beta sin(nu t)) + alpha / (alpha + beta cos(nu t))]");
        for (int i = 0; i < n; ++i) {
            const double t = s.period() * i / (n - 1);
            r.add_row({t, modulation::capacitance_waveform(s, t)});
        }
        r.plot = {"t_s", "C_F", "", false, false};
    } else if (table == "harmonics") {
        const auto n_samples = static_cast<std::size_t>(p.integer("n_samples", 1024));
        const int n_out = p.small_integer("n_harmonics", 6);
        auto single = s;
        single.scheme = modulation::Scheme::single;
        auto paired = s;
        paired.scheme = modulation::Scheme::paired;
        const auto hs = modulation::harmonic_spectrum(single, n_samples);
        const auto hp = modulation::harmonic_spectrum(paired, n_samples);
        r.add_column("harmonic", plumbing);
        r.add_column("single_amplitude_rel", "2 |X_k| / (N C0), X = DFT of C0 alpha / (alpha + beta sin(nu t))");
        r.add_column("paired_amplitude_rel",
                     "2 |X_k| / (N C0), X = DFT of (C0/2) [alpha / (alpha + beta sin) + alpha / (alpha + beta cos)]");
        for (int k = 0; k <= n_out && static_cast<std::size_t>(k) < hs.size(); ++k) {
            const auto u = static_cast<std::size_t>(k);
            r.add_row({static_cast<double>(k), hs[u].amplitude, hp[u].amplitude});
        }
        r.plot = {"harmonic", "single_amplitude_rel", "", false, false};
    } else {
        const int n_max = p.small_integer("n_sidebands", 5);
        const auto sp = modulation::fm_sideband_powers(fm_index, n_max);
        r.add_column("order", plumbing);
        r.add_column("power_fraction", "P_0 = J0(m)^2, P_n = 2 Jn(m)^2");
        r.add_column("cumulative_fraction", "sum of P_k for k <= n");
        double cum = 0.0;
        for (std::size_t n = 0; n < sp.powers.size(); ++n) {
            cum += sp.powers[n];
            r.add_row({static_cast<double>(n), sp.powers[n], cum});
        }
        r.plot = {"order", "power_fraction", "", false, false};
    }

    r.summary.emplace_back("eta", s.eta());
    r.summary.emplace_back("strong_modulation", detail::yes_no(s.strong_modulation()));
    r.summary.emplace_back("fm_index", fm_index);
    r.summary.emplace_back("carrier_plus_first_fraction", modulation::carrier_plus_first_fraction(fm_index));
    const double threshold = p.number("power_threshold", 0.99);
    r.summary.emplace_back("max_index_at_threshold", modulation::max_index_for_power_fraction(threshold));
    if (const auto fc = p.quantity("f_carrier", Dimension::hertz)) {
        r.summary.emplace_back("fm_index_from_eta",
                               modulation::fm_index_from_capacitance_modulation(s.eta(), *fc, s.nu / two_pi));
    }

    modulation::BawBeam beam;
    beam.length = p.quantity("beam_length", Dimension::metre, beam.length);
    beam.width = p.quantity("beam_width", Dimension::metre, beam.width);
    beam.thickness = p.quantity("beam_thickness", Dimension::metre, beam.thickness);
    beam.youngs_modulus = p.number("youngs_modulus", beam.youngs_modulus);
    beam.density = p.number("density", beam.density);
    const std::string boundary = p.choice("boundary", {"clamped-clamped", "free-free", "clamped-free"}, "clamped-clamped");
    beam.boundary = boundary == "free-free"      ? modulation::Boundary::free_free
                    : boundary == "clamped-free" ? modulation::Boundary::clamped_free
                                                 : modulation::Boundary::clamped_clamped;
    beam.mode_number = p.small_integer("mode_number", beam.mode_number);
    auto first = beam;
    first.mode_number = 1;
    const double f_mode = modulation::flexural_mode_frequency(beam);
    const double f_first = modulation::flexural_mode_frequency(first);
    r.summary.emplace_back("flexural_mode_Hz", f_mode);
    r.summary.emplace_back("flexural_mode1_Hz", f_first);
    r.summary.emplace_back("mode_ratio_to_mode1", f_mode / f_first);
    const auto sep = modulation::mode_separation_check(beam.length, beam.width, beam.thickness,
                                                       p.small_integer("ratio_max_den", 5), p.number("ratio_tol", 0.02));
    std::string flagged;
    for (const auto& c : sep.checks) {
        if (c.flagged) {
            flagged += (flagged.empty() ? "" : "; ") + c.pair + " near " + std::to_string(c.p) + "/" + std::to_string(c.q);
        }
    }
    r.summary.emplace_back("mode_separation", sep.pass() ? std::string("pass") : "flagged: " + flagged);
    return r;
}

inline Report run_coupling(const Params& p) {
    Report r;
    r.scenario = "coupling";
    const auto species = p.strings("species", {"Be-9"});
    if (species.empty()) throw ConfigError("key 'species': at least one species required");
    const double zeta = p.number("zeta", 0.25);
    const double height = p.quantity("ion_height", Dimension::metre, 25e-6);
    const double omega_i = two_pi * p.quantity("f_i", Dimension::hertz, 1e6);
    const double omega_lc_fixed = two_pi * p.quantity("f_lc", Dimension::hertz, 1e9);

    if (p.choice("table", {"result", "curve"}, "result") == "curve") {
        coupling::CapacitanceSweep sw;
        sw.C_min = p.quantity("C_min", Dimension::farad, sw.C_min);
        sw.C_max = p.quantity("C_max", Dimension::farad, sw.C_max);
        sw.n_points = p.small_integer("n_points", sw.n_points);
        sw.log_spacing = p.choice("scale", {"linear", "log"}, "log") == "log";
        sw.omega_lc = omega_lc_fixed;
        sw.zeta = zeta;
        sw.ion_height = height;
        sw.omega_i = omega_i;
        r.add_column("C_F", plumbing);
        r.add_column("species", plumbing);
        r.add_column("g0_over_2pi_Hz", "g0 = e zeta z0 dq0 / (r C hbar), z0 = sqrt(hbar / 2 m omega_i), Z = 1 / (omega_lc C)");
        for (const auto& name : species) {
            const auto ion = lookup_ion(name);
            for (const auto& pt : coupling::coupling_vs_capacitance(ion, sw)) r.add_row({pt.C, name, pt.g0_over_2pi});
        }
        r.plot = {"C_F", "g0_over_2pi_Hz", "species", sw.log_spacing, true};
        return r;
    }

    const double C0 = p.quantity("C0", Dimension::farad, 46e-15);
    const double eta = p.number("eta", 0.3);
    std::string dq0_prov;
    double dq0 = 0.0;
    double omega_lc = omega_lc_fixed;
    if (const auto v = p.quantity("dq0", Dimension::coulomb)) {
        dq0 = *v;
        dq0_prov = plumbing;
    } else if (const auto Z = p.quantity("Z", Dimension::ohm)) {
        dq0 = circuit::zero_point_charge(*Z);
        dq0_prov = "dq0 = sqrt(hbar / 2Z)";
    } else if (const auto L0 = p.quantity("L0", Dimension::henry)) {
        const auto c = circuit::derive_circuit(C0, *L0);
        dq0 = c.dq0;
        omega_lc = c.omega_r;
        dq0_prov = "dq0 = sqrt(hbar / 2Z), Z = sqrt(L0 / C0)";
    } else {
        dq0 = circuit::zero_point_charge(1.0 / (omega_lc * C0));
        dq0_prov = "dq0 = sqrt(hbar / 2Z), Z = 1 / (omega_lc C0)";
    }
    double kappa = p.quantity("kappa_rate", Dimension::hertz, 0.0);
    if (const auto fc = p.quantity("f_cavity", Dimension::hertz)) {
        kappa = coupling::cavity_decay_rate(*fc, p.number("Q").value_or(0.0));
    }
    const double decoherence = p.quantity("decoherence_rate", Dimension::hertz, coupling::default_decoherence_rate);
    const auto z0_override = p.quantity("z0", Dimension::metre);

    r.add_column("species", plumbing);
    r.add_column("C0_F", plumbing);
    r.add_column("z0_m", z0_override ? plumbing : "z0 = sqrt(hbar / 2 m omega_i)");
    r.add_column("dq0_C", dq0_prov);
    r.add_column("g0_over_2pi_Hz", "g0 = e zeta z0 dq0 / (r C0 hbar)");
    r.add_column("g_text_over_2pi_Hz", "g = eta g0");
    r.add_column("g_hamiltonian_over_2pi_Hz", "G = 2 eta g0 / 3");
    r.add_column("kappa_per_s", p.has("f_cavity") ? "kappa = 2 pi f / Q" : plumbing);
    r.add_column("decoherence_per_s", plumbing);
    r.add_column("regime", "strong iff eta g0 > max(kappa, decoherence)");
    for (const auto& name : species) {
        const auto ion = lookup_ion(name);
        coupling::MotionalCouplingInput in;
        in.zeta_geom = zeta;
        in.ion_height = height;
        in.C0 = C0;
        in.z0 = z0_override ? *z0_override : coupling::harmonic_oscillator_length(ion.mass, omega_i);
        in.dq0 = dq0;
        in.eta = eta;
        in.omega_i = omega_i;
        in.omega_lc = omega_lc;
        in.kappa = kappa;
        in.decoherence = decoherence;
        const auto res = coupling::motional_coupling(in);
        r.add_row({name, C0, in.z0, dq0, res.g0 / two_pi, res.g_text / two_pi, res.g_hamiltonian / two_pi, res.kappa,
                   res.decoherence, std::string(coupling::to_string(res.regime))});
    }
    r.plot = {"C0_F", "g0_over_2pi_Hz", "species", false, false};

    r.summary.emplace_back("kappa_over_2pi_Hz", kappa / two_pi);
    if (const auto B = p.quantity("B_trans", Dimension::tesla)) {
        coupling::MagneticDipoleInput mi;
        mi.B_trans = *B;
        mi.matrix_element = p.number("matrix_element", mi.matrix_element);
        mi.g_s = p.number("g_s", mi.g_s);
        mi.include_nuclear = p.boolean("include_nuclear", false);
        mi.g_I = p.number("g_I", mi.g_I);
        mi.nuclear_matrix_element = p.number("nuclear_matrix_element", mi.nuclear_matrix_element);
        const double g = coupling::magnetic_dipole_coupling(mi);
        r.summary.emplace_back("g_magnetic_over_2pi_Hz", g / two_pi);
        if (const auto n = p.integer("n_ensemble")) {
            r.summary.emplace_back("g_ensemble_over_2pi_Hz", coupling::ensemble_coupling(g, *n) / two_pi);
        }
    }
    if (const auto beta_cg = p.number("beta_cg")) {
        const double f_r = p.require_quantity("f_r", Dimension::hertz);
        const auto c_per_len = p.number("c_per_len");
        if (!c_per_len) throw ConfigError("missing required key 'c_per_len'");
        const double len = p.require_quantity("line_len", Dimension::metre);
        r.summary.emplace_back("g_charge_qubit_over_2pi_Hz",
                               coupling::charge_qubit_coupling(*beta_cg, two_pi * f_r, *c_per_len, len) / two_pi);
    }
    return r;
}

inline Report run_dynamics(const Params& p) {
    Report r;
    r.scenario = "dynamics";
    dynamics::DynamicsConfig cfg;
    if (const auto G = p.quantity("G_over_2pi", Dimension::hertz)) {
        cfg.g_eff = two_pi * *G;
    } else if (const auto g0 = p.quantity("g0_over_2pi", Dimension::hertz)) {
        const double eta = p.number("eta", 0.3);
        const bool text = p.choice("convention", {"hamiltonian", "text"}, "hamiltonian") == "text";
        cfg.g_eff = two_pi * *g0 * (text ? eta : 2.0 * eta / 3.0);
    } else {
        throw ConfigError("missing required key 'G_over_2pi' (or 'g0_over_2pi')");
    }
    cfg.delta = two_pi * p.quantity("delta_over_2pi", Dimension::hertz, 0.0);
    cfg.kappa = p.quantity("kappa_rate", Dimension::hertz, 0.0);
    cfg.gamma_ion = p.quantity("gamma_ion_rate", Dimension::hertz, 0.0);
    cfg.dt = p.quantity("dt", Dimension::second, 0.0);
    const double t_swap = dynamics::swap_time(cfg.g_eff);
    cfg.t_end = p.quantity("t_end", Dimension::second, 2.0 * t_swap);
    const int n_trunc = p.small_integer("n_trunc", 4);
    const bool damped = cfg.kappa > 0.0 || cfg.gamma_ion > 0.0;
    const std::string rep = p.choice("representation", {"pure", "density"}, damped ? "density" : "pure");
    if (rep == "pure" && damped) throw ConfigError("key 'representation': damping needs 'density'");
    const bool start_lc = p.choice("initial", {"lc", "ion"}, "lc") == "lc";
    const auto steps = static_cast<long long>(std::llround(cfg.t_end / cfg.effective_dt()));
    cfg.record_every = static_cast<int>(p.integer("record_every", std::max<long long>(1, steps / 200)));

    const auto representation = rep == "pure" ? dynamics::Representation::pure : dynamics::Representation::density;
    const auto state = dynamics::TwoModeState::fock(n_trunc, start_lc ? 1 : 0, start_lc ? 0 : 1, representation);
    const auto traj = dynamics::evolve(state, cfg);

    r.add_column("t_s", plumbing);
    r.add_column("n_lc", "<a^dag a>, RK4 on H/hbar = i G e^{-i Delta t} a b^dag + h.c.");
    r.add_column("n_ion", "<b^dag b>, RK4 on H/hbar = i G e^{-i Delta t} a b^dag + h.c.");
    r.add_column("p_01", "<0,1| rho |0,1>");
    r.add_column("excitations", "<a^dag a + b^dag b>");
    const bool with_analytic = !damped && start_lc;
    if (with_analytic) r.add_column("p_01_analytic", "(G^2 / Omega^2) sin^2(Omega t), Omega = sqrt(G^2 + Delta^2/4)");
    for (const auto& s : traj.samples) {
        std::vector<Cell> row{s.t, s.n_lc, s.n_ion, s.p_swap, s.excitations};
        if (with_analytic) row.emplace_back(dynamics::analytic_transfer(cfg.g_eff, cfg.delta, s.t));
        r.add_row(std::move(row));
    }
    r.plot = {"t_s", "p_01", "", false, false};

    r.summary.emplace_back("G_over_2pi_Hz", cfg.g_eff / two_pi);
    r.summary.emplace_back("swap_time_s", t_swap);
    r.summary.emplace_back("dt_s", traj.dt);
    r.summary.emplace_back("steps", static_cast<double>(traj.steps));
    if (start_lc) {
        auto fcfg = cfg;
        r.summary.emplace_back("swap_fidelity", damped ? dynamics::swap_fidelity_with_damping(fcfg, n_trunc)
                                                       : dynamics::analytic_transfer(cfg.g_eff, cfg.delta, t_swap));
    }
    return r;
}

inline Report run_budget(const Params& p) {
    Report r;
    r.scenario = "budget";
    std::vector<cryo::Stage> stages;
    for (const auto& s : p.records("stages")) {
        cryo::Stage st;
        st.name = *s.string("name");
        st.temperature = s.require_quantity("temperature", Dimension::kelvin);
        st.cooling_power = s.quantity("cooling_power", Dimension::watt, st.cooling_power);
        stages.push_back(st);
    }
    if (stages.empty()) stages = cryo::default_stages();

    std::vector<cryo::BudgetItem> items;
    for (const auto& it : p.records("items")) {
        cryo::BudgetItem bi;
        bi.source = *it.string("source");
        bi.sink_stage = *it.string("sink");
        if (const auto load = it.quantity("load", Dimension::watt)) {
            bi.load = *load;
        } else {
            const auto lambda = it.number("lambda");
            const auto area = it.number("area");
            if (!lambda || !area) {
                throw ConfigError("budget item '" + bi.source + "' needs 'load' or 'lambda', 'area', 'length', 'delta_T'");
            }
            bi.load = cryo::conduction_load(*lambda, *area, it.require_quantity("length", Dimension::metre),
                                            it.require_quantity("delta_T", Dimension::kelvin));
        }
        items.push_back(bi);
    }
    const auto rep = cryo::aggregate_budget(items, stages);

    std::vector<cryo::Attenuator> chain;
    std::vector<double> per_stage_db(stages.size(), 0.0);
    for (const auto& a : p.records("attenuators")) {
        const std::string stage = *a.string("stage");
        std::size_t k = 0;
        while (k < stages.size() && stages[k].name != stage) ++k;
        if (k == stages.size()) throw ConfigError("attenuator on unknown stage '" + stage + "'");
        const double db = a.require_quantity("attenuation", Dimension::decibel);
        chain.push_back({stages[k].temperature, db});
        per_stage_db[k] += db;
    }
    const double t_in = p.quantity("input_noise_temperature", Dimension::kelvin, 300.0);
    const auto att = cryo::attenuation_chain(t_in, chain, p.quantity("signal_power", Dimension::watt, 0.0));

    r.add_column("stage", plumbing);
    r.add_column("temperature_K", plumbing);
    r.add_column("load_W", "sum of item loads sinking to the stage; conduction items P = lambda dT A / L");
    r.add_column("cooling_power_W", plumbing);
    r.add_column("margin_W", "cooling power - load");
    r.add_column("status", "load < cooling power");
    r.add_column("noise_density_J_per_Hz", "k_B T");
    r.add_column("attenuation_dB", plumbing);
    for (std::size_t i = 0; i < rep.stages.size(); ++i) {
        const auto& s = rep.stages[i];
        r.add_row({s.stage.name, s.stage.temperature, s.load, s.stage.cooling_power, s.margin(),
                   std::string(s.pass() ? "pass" : "FAIL"), cryo::thermal_noise_density(s.stage.temperature),
                   per_stage_db[i]});
    }
    r.summary.emplace_back("outside_load_W", rep.outside_load);
    if (stages.size() > 1 && stages.back().temperature > 0.0) {
        r.summary.emplace_back("noise_ratio_hottest_to_coldest",
                               cryo::thermal_noise_density(stages.front().temperature) /
                                   cryo::thermal_noise_density(stages.back().temperature));
    }
    if (rep.mixing_chamber_load) r.summary.emplace_back("load_at_100mK_W", *rep.mixing_chamber_load);
    r.summary.emplace_back("mixing_chamber_rule", std::string(rep.mixing_chamber_rule_pass() ? "pass" : "FAIL"));
    r.summary.emplace_back("budget", std::string(rep.pass() ? "pass" : "FAIL"));
    if (!chain.empty()) {
        r.summary.emplace_back("attenuation_factor", att.total_factor);
        r.summary.emplace_back("output_noise_temperature_K", att.output_noise_temperature);
    }
    if (const auto D = p.number("diffusion")) {
        r.summary.emplace_back("qp_diffusion_length_m",
                               cryo::quasiparticle_diffusion_length(*D, p.require_quantity("tau_qp", Dimension::second)));
    }
    r.check_failed = !rep.pass();
    return r;
}

inline Report run_scenario(std::string_view name, const Params& p) {
    if (name == "geometry") return run_geometry(p);
    if (name == "circuit") return run_circuit(p);
    if (name == "plates") return run_plates(p);
    if (name == "modulation") return run_modulation(p);
    if (name == "coupling") return run_coupling(p);
    if (name == "dynamics") return run_dynamics(p);
    if (name == "budget") return run_budget(p);
    throw ConfigError("scenario '" + std::string(name) + "' cannot be run directly");
}

/// Evaluates the base scenario at each sweep value (in parallel) and stacks
/// the rows in sweep-index order, prefixed by the swept value.
inline Report run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("scenario 'sweep' needs a [sweep] table");
    const SweepSpec& sw = *cfg.sweep;
    const auto values = sw.values();
    std::vector<std::future<Report>> jobs;
    jobs.reserve(values.size());
    for (double v : values) {
        toml::Table params = cfg.parameters;
        toml::Value tv;
        if (sw.kind == ParamKind::integer) {
            tv.data = static_cast<std::int64_t>(v);
        } else if (sw.kind == ParamKind::quantity) {
            tv.data = format_quantity(Quantity(v, sw.dimension));
        } else {
            tv.data = v;
        }
        toml::set(params, sw.parameter, std::move(tv));
        jobs.push_back(std::async(std::launch::async, [name = sw.scenario, params = std::move(params)] {
            return run_scenario(name, Params(&params));
        }));
    }
    std::vector<Report> parts;
    parts.reserve(jobs.size());
    for (auto& j : jobs) parts.push_back(j.get());

    Report r;
    r.scenario = "sweep";
    const std::string col = detail::column_name(sw.parameter, sw.dimension);
    const Report& first = parts.front();
    const bool prepend = first.column_index(col) < 0;
    if (prepend) r.add_column(col, plumbing);
    for (const auto& c : first.columns) r.add_column(c.name, c.provenance);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (const auto& row : parts[i].rows) {
            std::vector<Cell> out;
            if (prepend) out.emplace_back(values[i]);
            out.insert(out.end(), row.begin(), row.end());
            r.add_row(std::move(out));
        }
        r.check_failed = r.check_failed || parts[i].check_failed;
    }
    r.summary.emplace_back("base_scenario", sw.scenario);
    r.summary.emplace_back("parameter", sw.parameter);
    r.summary.emplace_back("n_points", static_cast<double>(sw.n_points));
    r.summary.emplace_back("scale", std::string(sw.log_scale ? "log" : "linear"));
    r.plot = first.plot;
    r.plot.x = col;
    r.plot.log_x = sw.log_scale;
    if (r.plot.y.empty() || r.column_index(r.plot.y) < 0) r.plot.y = "";
    if (sw.scenario == "coupling") r.plot.log_y = sw.log_scale;
    return r;
}

/// Runs a loaded config and stamps the report metadata. The timestamp is only
/// recorded when supplied, so default output stays byte-reproducible.
inline Report run(const RunConfig& cfg, const std::string& timestamp = {}) {
    Report r = cfg.scenario == "sweep" ? run_sweep(cfg) : run_scenario(cfg.scenario, cfg.params());
    r.set_metadata("tool_version", tool_version);
    r.set_metadata("input_hash", "fnv1a64:" + cfg.input_hash);
    if (!timestamp.empty()) r.set_metadata("timestamp", timestamp);
    return r;
}

} // namespace hybridsim::workbench
