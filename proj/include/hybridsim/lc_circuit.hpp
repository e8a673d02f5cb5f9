#pragma once

// Lumped superconducting LC resonator: resonance, impedance and zero-point
// charge/flux fluctuations, plus transmission-line stub reactance and a
// low-fidelity interdigital capacitance estimate.

#include "hybridsim/error.hpp"
#include "hybridsim/quantities.hpp"

#include <cmath>
#include <optional>
#include <string_view>

namespace hybridsim::circuit {

struct LcCircuit {
    double C0 = 0.0;      // F
    double L0 = 0.0;      // H
    double omega_r = 0.0; // rad/s
    double Z = 0.0;       // ohm, used for the fluctuations below
    double dq0 = 0.0;     // C
    double dphi0 = 0.0;   // Wb
    bool impedance_forced = false;

    double frequency_hz() const { return omega_r / two_pi; }
    /// sqrt(L0/C0), regardless of any forced impedance.
    double natural_impedance() const { return std::sqrt(L0 / C0); }
};

/// Zero-point charge fluctuation sqrt(hbar / 2Z).
inline double zero_point_charge(double Z) {
    detail::require_positive(Z, "impedance");
    return std::sqrt(constants::hbar / (2.0 * Z));
}

/// Zero-point flux fluctuation sqrt(hbar Z / 2).
inline double zero_point_flux(double Z) {
    detail::require_positive(Z, "impedance");
    return std::sqrt(constants::hbar * Z / 2.0);
}

/// Derives resonance and fluctuations from (C0, L0). When `forced_Z` is given
/// it replaces sqrt(L0/C0) in dq0/dphi0; omega_r always follows from L0 and C0.
inline LcCircuit derive_circuit(double C0, double L0, std::optional<double> forced_Z = std::nullopt) {
    detail::require_positive(C0, "capacitance C0");
    detail::require_positive(L0, "inductance L0");
    LcCircuit c;
    c.C0 = C0;
    c.L0 = L0;
    c.omega_r = 1.0 / std::sqrt(L0 * C0);
    c.Z = forced_Z ? *forced_Z : std::sqrt(L0 / C0);
    c.impedance_forced = forced_Z.has_value();
    c.dq0 = zero_point_charge(c.Z);
    c.dphi0 = zero_point_flux(c.Z);
    return c;
}

enum class StubTermination { short_circuit, open_circuit };
enum class Reactance { inductive, capacitive, resonant };

inline std::string_view to_string(Reactance r) {
    switch (r) {
        case Reactance::inductive: return "inductive";
        case Reactance::capacitive: return "capacitive";
        case Reactance::resonant: return "resonant";
    }
    return "?";
}

struct StubResult {
    double reactance; // ohm; +/-inf at a pole
    Reactance character;
};

/// |tan| beyond this (or below its inverse) is treated as a resonance.
inline constexpr double stub_pole_threshold = 1e8;

/// Lossless stub input reactance: Z0 tan(kl) shorted, -Z0 cot(kl) open.
/// Character flips every quarter wavelength; poles and zeros are resonant.
inline StubResult stub_reactance(double Z0, double length, double wavelength, StubTermination term) {
    detail::require_positive(Z0, "stub impedance Z0");
    detail::require_positive(wavelength, "wavelength");
    detail::require_non_negative(length, "stub length");
    const double t = std::tan(two_pi * length / wavelength);
    const double at = std::abs(t);
    const bool singular = at > stub_pole_threshold || at < 1.0 / stub_pole_threshold;
    double x = 0.0;
    if (term == StubTermination::short_circuit) {
        x = Z0 * t;
    } else {
        x = (t == 0.0) ? -INFINITY : -Z0 / t;
    }
    if (singular) return {x, Reactance::resonant};
    return {x, x > 0.0 ? Reactance::inductive : Reactance::capacitive};
}

struct InterdigitalGeometry {
    int n_fingers = 4;
    double finger_length = 84e-6;
    double finger_width = 5e-6;
    double finger_thickness = 1e-6;
    double gap = 5e-6;
    double eps_eff = 6.25;
    int n_parallel = 2;
};

/// Parallel-edge estimate n_par (N-1) eps0 eps_eff t l / gap. Ignores fringe
/// and moving-plate contributions, so it is only an order-of-magnitude guide.
inline double interdigital_capacitance_estimate(const InterdigitalGeometry& g) {
    if (g.n_fingers < 2) throw DomainError("interdigital capacitor needs >= 2 fingers");
    if (g.n_parallel < 1) throw DomainError("n_parallel must be >= 1");
    detail::require_positive(g.finger_length, "finger length");
    detail::require_positive(g.finger_width, "finger width");
    detail::require_positive(g.finger_thickness, "finger thickness");
    detail::require_positive(g.gap, "finger gap");
    detail::require_positive(g.eps_eff, "effective permittivity");
    return g.n_parallel * (g.n_fingers - 1) * constants::vacuum_permittivity * g.eps_eff *
           g.finger_thickness * g.finger_length / g.gap;
}

} // namespace hybridsim::circuit
