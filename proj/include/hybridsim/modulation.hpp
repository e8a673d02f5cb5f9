#pragma once

// Parametric capacitance modulation driven by a flexing BAW resonator.
//
// A moving plate changes the effective separation of the primary capacitor,
// C = C0 alpha / (alpha + beta sin(nu t)). Two capacitors driven pi/2 apart
// (one at each antinode of the second flexural mode) cancel the even
// harmonics of that reciprocal. The resulting frequency modulation of the LC
// circuit is characterized by its Bessel sideband powers.

#include "hybridsim/error.hpp"
#include "hybridsim/numerics.hpp"
#include "hybridsim/quantities.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsim::modulation {

enum class Scheme { single, paired };

inline std::string_view to_string(Scheme s) { return s == Scheme::single ? "single" : "paired"; }

struct ModulationSpec {
    double C0 = 46e-15;       // F
    double alpha = 1e-6;      // fixed plate separation, m
    double beta_amp = 0.3e-6; // plate displacement amplitude, m
    double nu = two_pi * 1e6; // drive angular frequency, rad/s
    Scheme scheme = Scheme::paired;

    double eta() const { return beta_amp / alpha; }
    double period() const { return two_pi / nu; }
    /// Depths above one half make the reciprocal strongly non-sinusoidal.
    bool strong_modulation() const { return eta() > 0.5; }

    void validate() const {
        detail::require_positive(C0, "C0");
        detail::require_positive(alpha, "alpha");
        detail::require_positive(nu, "drive frequency");
        detail::require_non_negative(beta_amp, "modulation amplitude");
        if (!(beta_amp < alpha)) throw DomainError("modulation depth eta must be < 1");
    }
};

/// Instantaneous capacitance using the exact reciprocal form.
inline double capacitance_waveform(const ModulationSpec& s, double t) {
    s.validate();
    const double ph = s.nu * t;
    const double a = s.alpha;
    if (s.scheme == Scheme::single) return s.C0 * a / (a + s.beta_amp * std::sin(ph));
    return 0.5 * s.C0 * (a / (a + s.beta_amp * std::sin(ph)) + a / (a + s.beta_amp * std::cos(ph)));
}

struct Harmonic {
    int index;
    double amplitude; // peak amplitude / C0
};

/// One drive period sampled uniformly at `n_samples` (power of two, >= 256)
/// points. Harmonic 0 is the mean, harmonic k > 0 the peak amplitude of the
/// k-th cosine/sine pair; all normalized by C0.
inline std::vector<Harmonic> harmonic_spectrum(const ModulationSpec& s, std::size_t n_samples = 1024) {
    s.validate();
    if (n_samples < 256 || (n_samples & (n_samples - 1)) != 0) {
        throw DomainError("n_samples must be a power of two >= 256");
    }
    std::vector<std::complex<double>> buf(n_samples);
    const double dt = s.period() / static_cast<double>(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        buf[k] = capacitance_waveform(s, static_cast<double>(k) * dt);
    }
    numerics::fft(buf);
    const double n = static_cast<double>(n_samples);
    std::vector<Harmonic> out;
    out.reserve(n_samples / 2 + 1);
    for (std::size_t k = 0; k <= n_samples / 2; ++k) {
        const double w = (k == 0 || k == n_samples / 2) ? 1.0 : 2.0;
        out.push_back({static_cast<int>(k), w * std::abs(buf[k]) / n / s.C0});
    }
    return out;
}

struct SidebandPowers {
    std::vector<double> powers; // [0]: carrier J0^2; [n]: both n-th sidebands 2 Jn^2
    double carrier_plus_first;
    double total;
};

/// Fraction of FM power in the carrier and each sideband pair for a sinusoidal
/// modulation of the given index.
inline SidebandPowers fm_sideband_powers(double index, int n_max) {
    detail::require_non_negative(index, "modulation index");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    const auto j = numerics::bessel_j_sequence(n_max, index);
    SidebandPowers r;
    r.powers.resize(j.size());
    r.total = 0.0;
    for (std::size_t n = 0; n < j.size(); ++n) {
        r.powers[n] = (n == 0 ? 1.0 : 2.0) * j[n] * j[n];
        r.total += r.powers[n];
    }
    r.carrier_plus_first = r.powers[0] + r.powers[1];
    return r;
}

inline double carrier_plus_first_fraction(double index) {
    const auto j = numerics::bessel_j_sequence(1, index);
    return j[0] * j[0] + 2.0 * j[1] * j[1];
}

/// Largest modulation index, to 1e-4, for which carrier + first sideband pair
/// still hold at least `threshold` of the power. The fraction is not monotone
/// at large index; this returns the edge of the region that starts at zero.
inline double max_index_for_power_fraction(double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("threshold must be in (0, 1)");
    auto excess = [threshold](double m) { return carrier_plus_first_fraction(m) - threshold; };
    constexpr double step = 0.01;
    double lo = 0.0;
    while (excess(lo + step) >= 0.0) {
        lo += step;
        if (lo > 100.0) throw DomainError("no crossing found below index 100");
    }
    return numerics::bisect(excess, lo, lo + step, 1e-5);
}

/// First-order FM index f_delta/f_m for a capacitance depth eta: omega ~ C^-1/2,
/// so the peak fractional frequency swing is eta/2.
inline double fm_index_from_capacitance_modulation(double eta, double f_carrier, double f_mod) {
    detail::require_non_negative(eta, "eta");
    detail::require_positive(f_carrier, "carrier frequency");
    detail::require_positive(f_mod, "modulation frequency");
    return eta * f_carrier / (2.0 * f_mod);
}

// ---------------------------------------------------------------------------
// Flexural modes
// ---------------------------------------------------------------------------

enum class Boundary { clamped_clamped, free_free, clamped_free };

inline std::string_view to_string(Boundary b) {
    switch (b) {
        case Boundary::clamped_clamped: return "clamped-clamped";
        case Boundary::free_free: return "free-free";
        case Boundary::clamped_free: return "clamped-free";
    }
    return "?";
}

/// Euler-Bernoulli eigenvalue beta_n L.
inline double mode_eigenvalue(Boundary b, int mode) {
    if (mode < 1) throw DomainError("mode number must be >= 1");
    static constexpr std::array<double, 4> both_ends{4.73004074, 7.85320462, 10.99560784, 14.13716549};
    static constexpr std::array<double, 4> cantilever{1.87510407, 4.69409113, 7.85475744, 10.99554073};
    const auto& table = b == Boundary::clamped_free ? cantilever : both_ends;
    if (mode <= 4) return table[static_cast<std::size_t>(mode - 1)];
    // asymptotic: (2n+1)pi/2 for both-ends, (2n-1)pi/2 for cantilever
    return b == Boundary::clamped_free ? (2.0 * mode - 1.0) * pi / 2.0 : (2.0 * mode + 1.0) * pi / 2.0;
}

struct BawBeam {
    double length = 200e-6;
    double width = 50e-6;
    double thickness = 3e-6;
    double youngs_modulus = 63e9; // Pa, PZT handbook value
    double density = 7500.0;      // kg/m^3, PZT handbook value
    Boundary boundary = Boundary::clamped_clamped;
    int mode_number = 2;

    void validate() const {
        detail::require_positive(thickness, "beam thickness");
        if (!(length > width && width > thickness)) {
            throw DomainError("beam requires length > width > thickness");
        }
        detail::require_positive(youngs_modulus, "Young's modulus");
        detail::require_positive(density, "density");
    }
};

/// f = (beta_n L)^2 / (2 pi L^2) * sqrt(E t^2 / (12 rho)).
inline double flexural_mode_frequency(const BawBeam& beam) {
    beam.validate();
    const double bl = mode_eigenvalue(beam.boundary, beam.mode_number);
    return bl * bl / (two_pi * beam.length * beam.length) *
           std::sqrt(beam.youngs_modulus * beam.thickness * beam.thickness / (12.0 * beam.density));
}

struct RatioCheck {
    std::string pair;   // e.g. "length/width"
    double ratio;       // larger over smaller
    int p = 0;          // nearest offending p/q when flagged
    int q = 0;
    bool flagged = false;
};

struct ModeSeparationReport {
    std::vector<RatioCheck> checks;
    bool pass() const {
        for (const auto& c : checks) {
            if (c.flagged) return false;
        }
        return true;
    }
};

/// Flags dimension pairs whose ratio lies within `tol` (relative) of a small
/// rational p/q, p, q <= max_ratio_den; such pairs let other principal modes
/// share harmonics with the driven one.
inline ModeSeparationReport mode_separation_check(double length, double width, double thickness,
                                                  int max_ratio_den = 5, double tol = 0.02) {
    detail::require_positive(length, "length");
    detail::require_positive(width, "width");
    detail::require_positive(thickness, "thickness");
    if (max_ratio_den < 1) throw DomainError("max_ratio_den must be >= 1");
    struct Dim {
        const char* name;
        double v;
    };
    const std::array<Dim, 3> dims{{{"length", length}, {"width", width}, {"thickness", thickness}}};
    ModeSeparationReport rep;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        for (std::size_t j = i + 1; j < dims.size(); ++j) {
            RatioCheck c;
            c.pair = std::string(dims[i].name) + "/" + dims[j].name;
            c.ratio = std::max(dims[i].v, dims[j].v) / std::min(dims[i].v, dims[j].v);
            double best = INFINITY;
            for (int p = 1; p <= max_ratio_den; ++p) {
                for (int q = 1; q <= max_ratio_den; ++q) {
                    const double target = static_cast<double>(p) / q;
                    const double err = std::abs(c.ratio / target - 1.0);
                    if (err <= tol && err < best) {
                        best = err;
                        c.p = p;
                        c.q = q;
                        c.flagged = true;
                    }
                }
            }
            rep.checks.push_back(c);
        }
    }
    return rep;
}

} // namespace hybridsim::modulation
