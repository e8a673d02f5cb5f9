#pragma once

// Field at the ion from a pair of oppositely charged rectangular pads on the
// trap surface. Each pad carries a uniform surface charge, discretized into a
// grid of point charges. Pads lie in the z = 0 plane, centred at x = -d/2
// (+q) and x = +d/2 (-q); plate_length runs along x, plate_width along y.
// Pad thickness is neglected.

#include "hybridsim/error.hpp"
#include "hybridsim/numerics.hpp"
#include "hybridsim/quantities.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace hybridsim::electrostatics {

using Vec3 = std::array<double, 3>;

struct PlatePair {
    double plate_length = 17e-6;     // m, along the separation axis
    double plate_width = 8e-6;       // m
    double center_separation = 24e-6; // m
    double charge = 1e-15;           // C on the first plate, -charge on the second
    int grid_resolution = 32;

    void validate() const {
        detail::require_non_negative(plate_length, "plate length");
        detail::require_non_negative(plate_width, "plate width");
        if (grid_resolution < 2) throw DomainError("grid_resolution must be >= 2");
        if (center_separation < plate_length) {
            throw DomainError("plates overlap: center separation < plate length");
        }
    }
};

/// Superposed Coulomb field (V/m) at `point`.
inline Vec3 plate_pair_field(const PlatePair& p, const Vec3& point) {
    p.validate();
    const int n = p.grid_resolution;
    const double q_cell = p.charge / (static_cast<double>(n) * n);
    const double k = constants::coulomb_constant;
    const double scale = std::max({p.plate_length, p.plate_width, p.center_separation, 1e-30});
    Vec3 e{0.0, 0.0, 0.0};
    for (int plate = 0; plate < 2; ++plate) {
        const double cx = plate == 0 ? -p.center_separation / 2.0 : p.center_separation / 2.0;
        const double q = plate == 0 ? q_cell : -q_cell;
        for (int i = 0; i < n; ++i) {
            const double sx = cx + ((i + 0.5) / n - 0.5) * p.plate_length;
            for (int j = 0; j < n; ++j) {
                const double sy = ((j + 0.5) / n - 0.5) * p.plate_width;
                const double rx = point[0] - sx;
                const double ry = point[1] - sy;
                const double rz = point[2];
                const double r2 = rx * rx + ry * ry + rz * rz;
                if (r2 <= 1e-24 * scale * scale) {
                    throw DomainError("field point coincides with a source charge");
                }
                const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
                e[0] += k * q * rx * inv_r3;
                e[1] += k * q * ry * inv_r3;
                e[2] += k * q * rz * inv_r3;
            }
        }
    }
    return e;
}

/// Field component along the separation axis at height h above the midpoint.
inline double axial_field_at_ion(const PlatePair& p, double ion_height) {
    return plate_pair_field(p, {0.0, 0.0, ion_height})[0];
}

struct SeparationOptimum {
    double separation; // m
    double field;      // |E_x| at the ion, V/m
    bool unimodal;     // coarse pre-scan saw a single peak
};

/// Centre separation in [lo, hi] maximizing |E_x| at (0, 0, ion_height).
/// A 64-point pre-scan brackets the peak, then golden-section search refines
/// it to `resolution`. The lower bound is raised to plate_length (no overlap).
inline SeparationOptimum optimum_plate_separation(PlatePair p, double ion_height, double lo, double hi,
                                                  double resolution = 0.1e-6) {
    detail::require_positive(ion_height, "ion height");
    lo = std::max(lo, p.plate_length);
    if (!(hi > lo)) throw DomainError("empty feasible separation range");
    auto objective = [&](double d) {
        p.center_separation = d;
        return std::abs(axial_field_at_ion(p, ion_height));
    };

    constexpr int n_scan = 64;
    std::vector<double> scan(n_scan + 1);
    int best = 0;
    for (int i = 0; i <= n_scan; ++i) {
        scan[static_cast<std::size_t>(i)] = objective(lo + (hi - lo) * i / n_scan);
        if (scan[static_cast<std::size_t>(i)] > scan[static_cast<std::size_t>(best)]) best = i;
    }
    int peaks = 0;
    for (int i = 0; i <= n_scan; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const bool left = i == 0 || scan[u] > scan[u - 1];
        const bool right = i == n_scan || scan[u] >= scan[u + 1];
        if (left && right) ++peaks;
    }
    const double step = (hi - lo) / n_scan;
    const double a = std::max(lo, lo + (best - 1) * step);
    const double b = std::min(hi, lo + (best + 1) * step);
    const auto ext = numerics::golden_section_max(objective, a, b, resolution);
    return {ext.x, ext.value, peaks == 1};
}

struct SeparationPoint {
    double separation;
    double field;     // |E_x|, V/m
    double field_rel; // normalized to the sweep maximum
};

inline std::vector<SeparationPoint> separation_sweep(PlatePair p, double ion_height, double lo, double hi,
                                                     int n_points) {
    if (n_points < 1) throw DomainError("n_points must be >= 1");
    lo = std::max(lo, p.plate_length);
    if (hi < lo) throw DomainError("empty feasible separation range");
    std::vector<SeparationPoint> out;
    out.reserve(static_cast<std::size_t>(n_points));
    double peak = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double d = n_points == 1 ? lo : lo + (hi - lo) * i / (n_points - 1);
        p.center_separation = d;
        const double f = std::abs(axial_field_at_ion(p, ion_height));
        peak = std::max(peak, f);
        out.push_back({d, f, 0.0});
    }
    for (auto& pt : out) pt.field_rel = peak > 0.0 ? pt.field / peak : 0.0;
    return out;
}

struct LengthCurve {
    std::vector<double> lengths;
    std::vector<double> fields;   // |E_x| at the ion, V/m
    std::optional<numerics::LinearFit> fit; // nullopt: fewer than two lengths
};

/// |E_x| at the ion versus plate length at fixed surface charge density
/// (charge scales with area relative to the reference plate `p`). The centre
/// separation is held at p.center_separation.
inline LengthCurve field_vs_plate_length(const PlatePair& p, double ion_height,
                                         std::span<const double> lengths) {
    detail::require_positive(ion_height, "ion height");
    const double ref_area = p.plate_length * p.plate_width;
    if (!(ref_area > 0.0)) throw DomainError("reference plate must have non-zero area");
    const double sigma = p.charge / ref_area;
    LengthCurve curve;
    for (double len : lengths) {
        PlatePair q = p;
        q.plate_length = len;
        q.charge = sigma * len * p.plate_width;
        curve.lengths.push_back(len);
        curve.fields.push_back(std::abs(axial_field_at_ion(q, ion_height)));
    }
    curve.fit = numerics::fit_line(curve.lengths, curve.fields);
    return curve;
}

} // namespace hybridsim::electrostatics
