#include "hybridsim/numerics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace hybridsim;

TEST(Bessel, MatchesSeries) {
    for (double x : {0.0, 0.1, 0.3, 1.0, 2.5, 5.0, 8.0}) {
        const auto j = numerics::bessel_j_sequence(8, x);
        for (int n = 0; n <= 8; ++n) {
            EXPECT_NEAR(j[static_cast<std::size_t>(n)], oracle::bessel_series(n, x), 1e-13) << n << " " << x;
        }
    }
}

TEST(Bessel, MatchesStdLibrary) {
    for (int i = 0; i < 500; ++i) {
        const double x = oracle::uniform(0.0, 30.0);
        const int n = static_cast<int>(oracle::uniform(0.0, 12.0));
        EXPECT_NEAR(numerics::bessel_j(n, x), std::cyl_bessel_j(static_cast<double>(n), x), 1e-12);
    }
}

TEST(Bessel, FrozenValues) {
    const auto j = numerics::bessel_j_sequence(3, 0.3);
    EXPECT_NEAR(j[0], 0.9776262465382961, 1e-15);
    EXPECT_NEAR(j[1], 0.148318816273104, 1e-15);
    EXPECT_NEAR(j[2], 0.011165861949063964, 1e-15);
    EXPECT_NEAR(j[3], 0.000559343047748846, 1e-15);
    const auto k = numerics::bessel_j_sequence(3, 2.5);
    EXPECT_NEAR(k[0], -0.048383776468198, 1e-14);
    EXPECT_NEAR(k[1], 0.49709410246427405, 1e-14);
}

TEST(Bessel, NegativeArgumentParity) {
    for (int n = 0; n <= 5; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        EXPECT_NEAR(numerics::bessel_j(n, -1.7), sign * numerics::bessel_j(n, 1.7), 1e-14);
    }
}

TEST(Fft, MatchesNaiveDft) {
    const std::size_t n = 64;
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {oracle::uniform(-1, 1), oracle::uniform(-1, 1)};
    auto y = x;
    numerics::fft(y);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            s += x[t] * std::polar(1.0, -2.0 * oracle::pi * static_cast<double>(k * t) / static_cast<double>(n));
        }
        EXPECT_NEAR(std::abs(y[k] - s), 0.0, 1e-12);
    }
}

TEST(Fft, PureToneAndParseval) {
    const std::size_t n = 1024;
    std::vector<std::complex<double>> x(n);
    double energy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = 3.0 * std::cos(2.0 * oracle::pi * 5.0 * static_cast<double>(t) / n);
        energy += std::norm(x[t]);
    }
    numerics::fft(x);
    EXPECT_NEAR(2.0 * std::abs(x[5]) / n, 3.0, 1e-12);
    double spec = 0.0;
    for (const auto& v : x) spec += std::norm(v);
    EXPECT_NEAR(spec / n, energy, 1e-9 * energy);
}

TEST(Fft, RejectsNonPowerOfTwo) {
    std::vector<std::complex<double>> x(12);
    EXPECT_THROW(numerics::fft(x), DomainError);
}

TEST(GoldenSection, FindsParabolaPeak) {
    const auto ext = numerics::golden_section_max([](double x) { return -(x - 1.234) * (x - 1.234) + 2.0; }, 0.0, 5.0, 1e-9);
    // a flat peak is only located to ~sqrt(machine epsilon) in x
    EXPECT_NEAR(ext.x, 1.234, 1e-7);
    EXPECT_NEAR(ext.value, 2.0, 1e-12);
}

TEST(Bisect, FindsRootAndRejectsNoSignChange) {
    EXPECT_NEAR(numerics::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12), std::sqrt(2.0), 1e-11);
    EXPECT_THROW(numerics::bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-9), DomainError);
}

TEST(FitLine, ExactLineAndDegenerate) {
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const auto f = numerics::fit_line(x, y);
    ASSERT_TRUE(f);
    EXPECT_NEAR(f->slope, 2.0, 1e-12);
    EXPECT_NEAR(f->intercept, 1.0, 1e-12);
    const std::vector<double> one{1.0};
    EXPECT_FALSE(numerics::fit_line(one, one));
}
