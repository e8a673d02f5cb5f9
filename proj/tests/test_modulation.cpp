#include "hybridsim/modulation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hybridsim;

namespace {

modulation::ModulationSpec spec(double eta, modulation::Scheme s) {
    modulation::ModulationSpec m;
    m.alpha = 1e-6;
    m.beta_amp = eta * 1e-6;
    m.scheme = s;
    return m;
}

/// Fourier series of 1/(1 + eta sin x): mean 1/sqrt(1-eta^2), k-th harmonic
/// amplitude 2 r^k / sqrt(1-eta^2) with r = (1 - sqrt(1-eta^2)) / eta.
double single_harmonic_oracle(double eta, int k) {
    const double s = std::sqrt(1.0 - eta * eta);
    if (k == 0) return 1.0 / s;
    return 2.0 * std::pow((1.0 - s) / eta, k) / s;
}

} // namespace

TEST(Waveform, EndpointsAndMean) {
    const auto m = spec(0.3, modulation::Scheme::single);
    EXPECT_DOUBLE_EQ(modulation::capacitance_waveform(m, 0.0), m.C0);
    EXPECT_NEAR(modulation::capacitance_waveform(m, m.period() / 4.0), m.C0 / 1.3, 1e-27);
    const auto p = spec(0.3, modulation::Scheme::paired);
    EXPECT_NEAR(modulation::capacitance_waveform(p, 0.0), 0.5 * p.C0 * (1.0 + 1.0 / 1.3), 1e-27);
}

TEST(Waveform, DepthMustStayBelowOne) {
    EXPECT_THROW(modulation::capacitance_waveform(spec(1.0, modulation::Scheme::single), 0.0), DomainError);
    EXPECT_THROW(modulation::capacitance_waveform(spec(1.2, modulation::Scheme::paired), 0.0), DomainError);
    EXPECT_TRUE(spec(0.6, modulation::Scheme::single).strong_modulation());
    EXPECT_FALSE(spec(0.3, modulation::Scheme::single).strong_modulation());
}

TEST(Harmonics, SingleMatchesClosedForm) {
    for (double eta : {0.05, 0.3, 0.6}) {
        const auto h = modulation::harmonic_spectrum(spec(eta, modulation::Scheme::single));
        for (int k = 0; k <= 5; ++k) {
            EXPECT_NEAR(h[static_cast<std::size_t>(k)].amplitude, single_harmonic_oracle(eta, k), 1e-12) << eta << " " << k;
        }
    }
    const auto h = modulation::harmonic_spectrum(spec(0.3, modulation::Scheme::single));
    EXPECT_NEAR(h[1].amplitude, 0.3218989, 1e-7);
}

TEST(Harmonics, PairedCancelsEvenHarmonicsExceptMultiplesOfFour) {
    const auto hp = modulation::harmonic_spectrum(spec(0.3, modulation::Scheme::paired));
    const auto hs = modulation::harmonic_spectrum(spec(0.3, modulation::Scheme::single));
    EXPECT_LT(hp[2].amplitude, 1e-12);
    EXPECT_LT(hp[6].amplitude, 1e-12);
    EXPECT_NEAR(hp[4].amplitude, hs[4].amplitude, 1e-12);
    // odd harmonics add in quadrature: |1 + i^k| / 2 = 1/sqrt(2)
    EXPECT_NEAR(hp[1].amplitude, hs[1].amplitude / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(hp[1].amplitude, 0.2276169, 1e-7);
    EXPECT_NEAR(hp[0].amplitude, 1.0 / std::sqrt(1.0 - 0.09), 1e-12);
}

TEST(Harmonics, SampleCountValidation) {
    const auto m = spec(0.3, modulation::Scheme::single);
    EXPECT_THROW(modulation::harmonic_spectrum(m, 128), DomainError);
    EXPECT_THROW(modulation::harmonic_spectrum(m, 1000), DomainError);
    EXPECT_EQ(modulation::harmonic_spectrum(m, 256).size(), 129u);
}

TEST(Sidebands, FrozenFractions) {
    EXPECT_NEAR(modulation::carrier_plus_first_fraction(0.3), 0.9997500204418669, 1e-14);
    EXPECT_NEAR(modulation::carrier_plus_first_fraction(1.0), 0.9728165355425824, 1e-14);
    const auto p = modulation::fm_sideband_powers(0.3, 3);
    EXPECT_NEAR(p.powers[0], 0.9776262465382961 * 0.9776262465382961, 1e-14);
    EXPECT_NEAR(p.powers[1], 2.0 * 0.148318816273104 * 0.148318816273104, 1e-14);
    EXPECT_EQ(p.carrier_plus_first, p.powers[0] + p.powers[1]);
}

TEST(Sidebands, PowerSumIsOneProperty) {
    for (int i = 0; i < 300; ++i) {
        const double m = oracle::uniform(0.0, 3.0);
        EXPECT_NEAR(modulation::fm_sideband_powers(m, 30).total, 1.0, 1e-12) << m;
    }
    EXPECT_EQ(modulation::fm_sideband_powers(0.0, 4).powers[0], 1.0);
}

TEST(Sidebands, MaxIndexForThreshold) {
    const double m99 = modulation::max_index_for_power_fraction(0.99);
    EXPECT_NEAR(m99, 0.7677058, 1e-4);
    EXPECT_NEAR(modulation::carrier_plus_first_fraction(m99), 0.99, 1e-4);
    EXPECT_NEAR(modulation::max_index_for_power_fraction(0.5), 2.4922170, 1e-4);
    EXPECT_THROW(modulation::max_index_for_power_fraction(1.0), DomainError);
}

TEST(Sidebands, IndexFromCapacitanceDepth) {
    EXPECT_DOUBLE_EQ(modulation::fm_index_from_capacitance_modulation(0.3, 1e9, 1e6), 150.0);
    EXPECT_THROW(modulation::fm_index_from_capacitance_modulation(0.3, 1e9, 0.0), DomainError);
}

TEST(Flexural, ReferenceBeam) {
    const modulation::BawBeam beam; // 200 x 50 x 3 um, clamped-clamped mode 2
    const double bl = 7.85320462;
    const double want = bl * bl / (2.0 * oracle::pi * 200e-6 * 200e-6) * std::sqrt(63e9 * 9e-12 / (12.0 * 7500.0));
    EXPECT_NEAR(oracle::rel(modulation::flexural_mode_frequency(beam), want), 0.0, 1e-14);
    EXPECT_NEAR(modulation::flexural_mode_frequency(beam), 615919.908, 1e-2);
    auto first = beam;
    first.mode_number = 1;
    EXPECT_NEAR(modulation::flexural_mode_frequency(beam) / modulation::flexural_mode_frequency(first),
                2.756538509892319, 1e-12);
}

TEST(Flexural, ScalingProperties) {
    for (int i = 0; i < 200; ++i) {
        modulation::BawBeam b;
        b.length = oracle::uniform(100e-6, 500e-6);
        b.width = oracle::uniform(10e-6, 90e-6);
        b.thickness = oracle::uniform(1e-6, 9e-6);
        const double f = modulation::flexural_mode_frequency(b);
        auto thick = b;
        thick.thickness *= 2.0;
        if (thick.thickness < thick.width) {
            EXPECT_NEAR(modulation::flexural_mode_frequency(thick) / f, 2.0, 1e-12);
        }
        auto longer = b;
        longer.length *= 2.0;
        EXPECT_NEAR(modulation::flexural_mode_frequency(longer) / f, 0.25, 1e-12);
    }
}

TEST(Flexural, Validation) {
    modulation::BawBeam b;
    b.width = 300e-6;
    EXPECT_THROW(modulation::flexural_mode_frequency(b), DomainError);
    EXPECT_THROW(modulation::mode_eigenvalue(modulation::Boundary::free_free, 0), DomainError);
    EXPECT_NEAR(modulation::mode_eigenvalue(modulation::Boundary::clamped_free, 1), 1.87510407, 1e-8);
}

TEST(ModeSeparation, FlagsSmallRationals) {
    const auto ref = modulation::mode_separation_check(200e-6, 50e-6, 3e-6);
    EXPECT_FALSE(ref.pass()); // length/width = 4
    EXPECT_TRUE(ref.checks[0].flagged);
    EXPECT_EQ(ref.checks[0].p, 4);
    EXPECT_EQ(ref.checks[0].q, 1);
    const auto ok = modulation::mode_separation_check(200e-6, 47e-6, 3e-6);
    EXPECT_TRUE(ok.pass());
    EXPECT_FALSE(modulation::mode_separation_check(100e-6, 61e-6, 3e-6).pass()); // ~5/3 within 2%
}
