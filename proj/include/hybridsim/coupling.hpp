#pragma once

// Coupling strengths between a trapped ion and superconducting circuits.
//
// The central one is the motional (charge-dipole) coupling of an ion to a
// parametrically modulated LC resonator,
//     g0 = e zeta z0 dq0 / (r C0 hbar),
// with effective exchange rate eta*g0 in the text convention and 2*eta*g0/3
// as the prefactor of the rotating-wave interaction Hamiltonian. Both are
// reported; downstream dynamics uses the Hamiltonian one by default.

#include "hybridsim/error.hpp"
#include "hybridsim/lc_circuit.hpp"
#include "hybridsim/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace hybridsim::coupling {

/// Default ion decoherence rate, s^-1.
inline constexpr double default_decoherence_rate = 1e3;

/// Ground-state extent sqrt(hbar / (2 m omega_i)).
inline double harmonic_oscillator_length(double mass, double omega_i) {
    detail::require_positive(mass, "ion mass");
    detail::require_positive(omega_i, "secular frequency");
    return std::sqrt(constants::hbar / (2.0 * mass * omega_i));
}

enum class Regime { strong, weak };

inline std::string_view to_string(Regime r) { return r == Regime::strong ? "strong" : "weak"; }

enum class Convention { text, hamiltonian };

struct MotionalCouplingInput {
    double zeta_geom = 0.25; // geometry factor
    double ion_height = 25e-6;
    double C0 = 46e-15;
    double z0 = 24e-9;
    double dq0 = 1.4e-19;
    double eta = 0.3;
    double omega_i = two_pi * 1e6;
    double omega_lc = two_pi * 1e9;
    double delta = 0.0; // nu - (omega_lc - omega_i), rad/s
    double kappa = 0.0; // LC decay, rad/s
    double decoherence = default_decoherence_rate;

    void validate() const {
        if (!(zeta_geom > 0.0 && zeta_geom <= 1.0)) throw DomainError("zeta must be in (0, 1]");
        detail::require_positive(ion_height, "ion height");
        detail::require_positive(C0, "C0");
        detail::require_positive(z0, "z0");
        detail::require_positive(dq0, "dq0");
        detail::require_positive(eta, "eta");
        detail::require_positive(omega_i, "omega_i");
        detail::require_positive(omega_lc, "omega_lc");
        detail::require_non_negative(kappa, "kappa");
        detail::require_non_negative(decoherence, "decoherence");
    }
};

struct CouplingResult {
    double g0 = 0.0;            // rad/s
    double g_text = 0.0;        // eta g0
    double g_hamiltonian = 0.0; // 2 eta g0 / 3
    double kappa = 0.0;
    double decoherence = 0.0;
    Regime regime = Regime::weak;

    double effective(Convention c) const { return c == Convention::text ? g_text : g_hamiltonian; }
};

/// Bare coupling g0 = e zeta z0 dq0 / (r C0 hbar), rad/s.
inline double bare_motional_coupling(double zeta, double z0, double dq0, double r, double C0) {
    return constants::elementary_charge * zeta * z0 * dq0 / (r * C0 * constants::hbar);
}

/// Strong iff g_text exceeds both loss rates.
inline Regime classify(double g_text, double kappa, double decoherence) {
    return g_text > std::max(kappa, decoherence) ? Regime::strong : Regime::weak;
}

inline CouplingResult motional_coupling(const MotionalCouplingInput& in) {
    in.validate();
    CouplingResult r;
    r.g0 = bare_motional_coupling(in.zeta_geom, in.z0, in.dq0, in.ion_height, in.C0);
    r.g_text = in.eta * r.g0;
    r.g_hamiltonian = 2.0 * in.eta * r.g0 / 3.0;
    r.kappa = in.kappa;
    r.decoherence = in.decoherence;
    r.regime = classify(r.g_text, r.kappa, r.decoherence);
    return r;
}

struct CurvePoint {
    double C;               // F
    double g0_over_2pi;     // Hz
};

struct CapacitanceSweep {
    double C_min = 2e-15;
    double C_max = 50e-15;
    int n_points = 30;
    bool log_spacing = true;
    double omega_lc = two_pi * 1e9;
    double zeta = 0.25;
    double ion_height = 25e-6;
    double omega_i = two_pi * 1e6;
};

/// g0 at capacitance C with omega_lc held fixed: Z = 1/(omega_lc C).
inline double g0_at_capacitance(const IonSpecies& ion, double C, double omega_lc, double zeta, double r,
                                double omega_i) {
    detail::require_positive(C, "capacitance");
    detail::require_positive(omega_lc, "omega_lc");
    const double Z = 1.0 / (omega_lc * C);
    const double dq0 = circuit::zero_point_charge(Z);
    const double z0 = harmonic_oscillator_length(ion.mass, omega_i);
    return bare_motional_coupling(zeta, z0, dq0, r, C);
}

/// g0/2pi versus total circuit capacitance for one species.
inline std::vector<CurvePoint> coupling_vs_capacitance(const IonSpecies& ion, const CapacitanceSweep& s) {
    if (s.n_points < 1) throw DomainError("n_points must be >= 1");
    detail::require_positive(s.C_min, "C_min");
    if (s.C_max < s.C_min || (s.n_points > 1 && s.C_max == s.C_min)) {
        throw DomainError("empty capacitance range");
    }
    std::vector<CurvePoint> out;
    out.reserve(static_cast<std::size_t>(s.n_points));
    for (int i = 0; i < s.n_points; ++i) {
        const double f = s.n_points == 1 ? 0.0 : static_cast<double>(i) / (s.n_points - 1);
        const double C = s.log_spacing ? s.C_min * std::pow(s.C_max / s.C_min, f)
                                       : s.C_min + (s.C_max - s.C_min) * f;
        out.push_back({C, g0_at_capacitance(ion, C, s.omega_lc, s.zeta, s.ion_height, s.omega_i) / two_pi});
    }
    return out;
}

struct MagneticDipoleInput {
    double B_trans = 1e-10; // T
    double matrix_element = 0.5;
    double g_s = 2.0;
    bool include_nuclear = false;
    double g_I = 0.0;
    double nuclear_matrix_element = 0.5;
};

/// Single-photon M1 coupling (1/sqrt 2) <1|mu_B (g_s S - (mu_N/mu_B) g_I I)|0> B / hbar, rad/s.
inline double magnetic_dipole_coupling(const MagneticDipoleInput& in) {
    detail::require_non_negative(in.B_trans, "B_trans");
    double moment = constants::bohr_magneton * in.g_s * in.matrix_element;
    if (in.include_nuclear) moment -= constants::nuclear_magneton * in.g_I * in.nuclear_matrix_element;
    return moment * in.B_trans / (std::sqrt(2.0) * constants::hbar);
}

inline double ensemble_coupling(double g_single, long long N) {
    if (N < 1) throw DomainError("ensemble size must be >= 1");
    return std::sqrt(static_cast<double>(N)) * g_single;
}

/// Charge qubit in a transmission-line resonator: (beta e / hbar) sqrt(hbar omega_r / (c L)).
inline double charge_qubit_coupling(double beta_cg, double omega_r, double c_per_len, double line_len) {
    if (!(beta_cg > 0.0 && beta_cg < 1.0)) throw DomainError("beta must be in (0, 1)");
    detail::require_positive(omega_r, "omega_r");
    detail::require_positive(c_per_len, "capacitance per length");
    detail::require_positive(line_len, "line length");
    return beta_cg * constants::elementary_charge / constants::hbar *
           std::sqrt(constants::hbar * omega_r / (c_per_len * line_len));
}

/// kappa = 2 pi f / Q, rad/s.
inline double cavity_decay_rate(double f, double Q) {
    detail::require_positive(f, "cavity frequency");
    detail::require_positive(Q, "quality factor");
    return two_pi * f / Q;
}

} // namespace hybridsim::coupling
