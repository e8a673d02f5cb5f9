#pragma once

// Small numerical kernels shared by the physics modules.

#include "hybridsim/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hybridsim::numerics {

/// J_0(x) .. J_{n_max}(x), integer orders, by Miller's backward recurrence
/// normalized with J_0 + 2 sum J_{2k} = 1.
inline std::vector<double> bessel_j_sequence(int n_max, double x) {
    if (n_max < 0) throw DomainError("bessel order must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double ax = std::abs(x);
    const int top_guess = std::max(n_max, static_cast<int>(ax)) + 20 +
                          static_cast<int>(std::sqrt(40.0 * std::max<double>(n_max, ax)));
    const int start = top_guess + (top_guess % 2); // even

    double j_next = 0.0;
    double j_curr = 1e-300;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double j_prev = (2.0 * k / ax) * j_curr - j_next;
        j_next = j_curr;
        j_curr = j_prev; // now J_{k-1}
        if (std::abs(j_curr) > 1e250) {
            j_curr *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
        const int order = k - 1;
        if (order <= n_max) out[static_cast<std::size_t>(order)] = j_curr;
        if (order != 0 && order % 2 == 0) norm += 2.0 * j_curr;
    }
    norm += j_curr; // J_0
    for (auto& v : out) v /= norm;
    if (x < 0.0) {
        for (std::size_t n = 1; n < out.size(); n += 2) out[n] = -out[n];
    }
    return out;
}

inline double bessel_j(int n, double x) {
    return bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
}

/// In-place iterative radix-2 FFT (forward, no normalization).
inline void fft(std::span<std::complex<double>> data) {
    const std::size_t n = data.size();
    if (n == 0 || !std::has_single_bit(n)) throw DomainError("fft length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto w = std::polar(1.0, angle * static_cast<double>(k));
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
}

struct Extremum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
inline Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                   double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if ((flo > 0.0) == (fhi > 0.0)) throw DomainError("bisection bracket has no sign change");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct LinearFit {
    double slope;
    double intercept;
};

/// Ordinary least squares y = slope*x + intercept; nullopt with fewer than two distinct x.
inline std::optional<LinearFit> fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::nullopt;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    const double slope = sxy / sxx;
    return LinearFit{slope, my - slope * mx};
}

} // namespace hybridsim::numerics
