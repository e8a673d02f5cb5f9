#pragma once

// Surface-electrode trap geometry: ion height above two rf electrodes of widths
// b and c separated by a, the optimum-width ratios, the axial potential
// expansion and the power-law scaling of anomalous heating with ion height.

#include "hybridsim/error.hpp"
#include "hybridsim/quantities.hpp"

#include <cmath>

namespace hybridsim::trap {

/// b/a at the optimum for c = b/2.
inline constexpr double optimum_width_ratio = 4.90;
/// Outer dc electrode width relative to a, maximizing the quartic axial term.
inline constexpr double outer_width_ratio = 3.66;
/// Nominal heating-rate exponent and its uncertainty band.
inline constexpr double heating_exponent = 3.5;
inline constexpr double heating_exponent_uncertainty = 0.1;

/// h = sqrt(a b c (a + b + c)) / (b + c).
inline double ion_height(double a, double b, double c) {
    detail::require_positive(a, "rf electrode separation a");
    detail::require_positive(b, "rf electrode width b");
    detail::require_positive(c, "rf electrode width c");
    return std::sqrt(a * b * c * (a + b + c)) / (b + c);
}

struct TrapGeometry {
    double a = 0.0; // rf electrode separation, m
    double b = 0.0; // first rf electrode width, m
    double c = 0.0; // second rf electrode width, m
    double w_outer = 0.0; // outer dc electrode width, m

    static TrapGeometry make(double a, double b, double c, double w_outer) {
        ion_height(a, b, c); // validates
        return {a, b, c, w_outer};
    }

    double height() const { return ion_height(a, b, c); }
    /// b != c gives the principal axes a projection onto a single cooling beam.
    bool asymmetric() const { return b != c; }
};

struct OptimumWidths {
    double b;
    double c;
    double w_outer;
};

inline OptimumWidths optimum_widths(double a) {
    detail::require_positive(a, "rf electrode separation a");
    const double b = optimum_width_ratio * a;
    return {b, b / 2.0, outer_width_ratio * a};
}

inline TrapGeometry optimum_geometry(double a) {
    const auto w = optimum_widths(a);
    return TrapGeometry::make(a, w.b, w.c, w.w_outer);
}

/// Accepts a rounded (a, b, c) set as "optimum" when b/a is within `tol` of
/// 4.90 and c/b within `tol` of 1/2 (relative).
inline bool matches_optimum_ratios(double a, double b, double c, double tol = 0.03) {
    ion_height(a, b, c);
    const double zeta_err = std::abs(b / a / optimum_width_ratio - 1.0);
    const double half_err = std::abs((c / b) / 0.5 - 1.0);
    return zeta_err <= tol && half_err <= tol;
}

struct AxialPotential {
    double gamma = 0.0;        // V/m^2
    double beta_quartic = 0.0; // V/m^4

    /// gamma < 0 and beta > 0: a double-well wedge usable for ion separation.
    bool is_separation_wedge() const { return gamma < 0.0 && beta_quartic > 0.0; }
};

/// Potential energy 2 e gamma z^2 + 2 e beta z^4 (J).
inline double axial_potential(double z, const AxialPotential& p) {
    const double z2 = z * z;
    return 2.0 * constants::elementary_charge * (p.gamma * z2 + p.beta_quartic * z2 * z2);
}

/// rate0 (measured at height r0) scaled to height r1 by (r0/r1)^exponent.
inline double heating_rate_scaled(double rate0, double r0, double r1,
                                  double exponent = heating_exponent) {
    detail::require_non_negative(rate0, "heating rate");
    detail::require_positive(r0, "reference ion height");
    detail::require_positive(r1, "ion height");
    return rate0 * std::pow(r0 / r1, exponent);
}

} // namespace hybridsim::trap
