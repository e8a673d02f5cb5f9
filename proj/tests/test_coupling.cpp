#include "hybridsim/coupling.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hybridsim;

namespace {

double z0_oracle(double atomic_mass_u, double f_secular) {
    return std::sqrt(oracle::hbar / (2.0 * oracle::ion_mass(atomic_mass_u) * 2.0 * oracle::pi * f_secular));
}

/// g0 = e zeta z0 dq0 / (r C0 hbar), in rad/s.
double g0_oracle(double zeta, double z0, double dq0, double r, double C0) {
    return oracle::e * zeta * z0 * dq0 / (r * C0 * oracle::hbar);
}

/// g0/2pi with omega_lc fixed, so Z = 1/(omega_lc C) and dq0 = sqrt(hbar / 2Z).
double g0_vs_c_oracle(double atomic_mass_u, double C) {
    const double w_lc = 2.0 * oracle::pi * 1e9;
    const double dq0 = std::sqrt(oracle::hbar * w_lc * C / 2.0);
    return g0_oracle(0.25, z0_oracle(atomic_mass_u, 1e6), dq0, 25e-6, C) / (2.0 * oracle::pi);
}

} // namespace

TEST(OscillatorLength, Species) {
    const auto be = lookup_ion("Be-9");
    const auto yb = lookup_ion("Yb-171");
    const double w = 2.0 * oracle::pi * 1e6;
    EXPECT_NEAR(oracle::rel(coupling::harmonic_oscillator_length(be.mass, w), z0_oracle(9.0121831, 1e6)), 0.0, 1e-12);
    EXPECT_NEAR(oracle::rel(coupling::harmonic_oscillator_length(be.mass, w), 2.368136953632655e-08), 0.0, 1e-9);
    EXPECT_NEAR(oracle::rel(coupling::harmonic_oscillator_length(yb.mass, w), 5.43741040963727e-09), 0.0, 1e-9);
    EXPECT_LT(oracle::rel(coupling::harmonic_oscillator_length(be.mass, w), 24e-9), 0.02);
    EXPECT_THROW(coupling::harmonic_oscillator_length(0.0, w), DomainError);
}

TEST(MotionalCoupling, ReferenceValues) {
    const coupling::MotionalCouplingInput in;
    const auto r = coupling::motional_coupling(in);
    const double g0 = g0_oracle(0.25, 24e-9, 1.4e-19, 25e-6, 46e-15);
    EXPECT_NEAR(oracle::rel(r.g0, g0), 0.0, 1e-12);
    EXPECT_NEAR(r.g0 / (2.0 * oracle::pi), 176618.34, 0.01);
    EXPECT_NEAR(r.g_text / (2.0 * oracle::pi), 52985.5, 0.01);
    EXPECT_NEAR(r.g_hamiltonian / (2.0 * oracle::pi), 35323.67, 0.01);
    EXPECT_NEAR(r.g_text / r.g_hamiltonian, 1.5, 1e-14);
    EXPECT_EQ(r.effective(coupling::Convention::text), r.g_text);
    EXPECT_EQ(r.effective(coupling::Convention::hamiltonian), r.g_hamiltonian);
    EXPECT_EQ(r.regime, coupling::Regime::strong);
}

TEST(MotionalCoupling, ClassifyUsesBothRates) {
    EXPECT_EQ(coupling::classify(10.0, 1.0, 2.0), coupling::Regime::strong);
    EXPECT_EQ(coupling::classify(10.0, 11.0, 2.0), coupling::Regime::weak);
    EXPECT_EQ(coupling::classify(10.0, 1.0, 10.0), coupling::Regime::weak);
    coupling::MotionalCouplingInput in;
    in.kappa = coupling::cavity_decay_rate(12.6e9, 1e5);
    EXPECT_EQ(coupling::motional_coupling(in).regime, coupling::Regime::weak);
}

TEST(MotionalCoupling, Validation) {
    coupling::MotionalCouplingInput in;
    in.zeta_geom = 1.5;
    EXPECT_THROW(coupling::motional_coupling(in), DomainError);
    in = {};
    in.C0 = 0.0;
    EXPECT_THROW(coupling::motional_coupling(in), DomainError);
}

TEST(MotionalCoupling, ScalingProperty) {
    for (int i = 0; i < 1000; ++i) {
        coupling::MotionalCouplingInput in;
        in.z0 = oracle::log_uniform(1e-9, 1e-7);
        in.dq0 = oracle::log_uniform(1e-20, 1e-18);
        in.ion_height = oracle::log_uniform(5e-6, 200e-6);
        in.C0 = oracle::log_uniform(1e-15, 1e-12);
        const double g = coupling::motional_coupling(in).g0;
        EXPECT_NEAR(oracle::rel(g, g0_oracle(0.25, in.z0, in.dq0, in.ion_height, in.C0)), 0.0, 1e-12);
        auto twice = in;
        twice.ion_height *= 2.0;
        EXPECT_NEAR(coupling::motional_coupling(twice).g0 / g, 0.5, 1e-12);
    }
}

TEST(CapacitanceCurve, InverseSquareRootSlope) {
    const auto yb = lookup_ion("Yb-171");
    const coupling::CapacitanceSweep s;
    const auto curve = coupling::coupling_vs_capacitance(yb, s);
    ASSERT_EQ(curve.size(), 30u);
    EXPECT_DOUBLE_EQ(curve.front().C, 2e-15);
    EXPECT_NEAR(oracle::rel(curve.back().C, 50e-15), 0.0, 1e-14);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_LT(curve[i].g0_over_2pi, curve[i - 1].g0_over_2pi);
        const double slope = std::log(curve[i].g0_over_2pi / curve[i - 1].g0_over_2pi) / std::log(curve[i].C / curve[i - 1].C);
        EXPECT_NEAR(slope, -0.5, 1e-6);
    }
    for (const auto& p : curve) EXPECT_NEAR(oracle::rel(p.g0_over_2pi, g0_vs_c_oracle(170.9363258, p.C)), 0.0, 1e-12);
}

TEST(CapacitanceCurve, YbAtFiveFemtofarad) {
    const auto yb = lookup_ion("Yb-171");
    const double g = coupling::g0_at_capacitance(yb, 5e-15, 2.0 * oracle::pi * 1e9, 0.25, 25e-6, 2.0 * oracle::pi * 1e6) /
                     (2.0 * oracle::pi);
    EXPECT_NEAR(g, 107022.35, 0.05);
    EXPECT_GE(g, 100e3);
    EXPECT_LE(g, 250e3);
}

TEST(CapacitanceCurve, SpeciesOrderFollowsMass) {
    const auto names = registered_species();
    for (int i = 0; i < 200; ++i) {
        const double C = oracle::log_uniform(1e-15, 1e-13);
        double prev = INFINITY;
        for (auto n : names) {
            const auto ion = lookup_ion(n);
            const double g = coupling::g0_at_capacitance(ion, C, 2.0 * oracle::pi * 1e9, 0.25, 25e-6, 2.0 * oracle::pi * 1e6);
            EXPECT_LT(g, prev) << n;
            prev = g;
        }
        const auto be = lookup_ion("Be-9");
        const auto yb = lookup_ion("Yb-171");
        const double ratio = coupling::g0_at_capacitance(be, C, 1e9, 0.25, 25e-6, 1e6) /
                             coupling::g0_at_capacitance(yb, C, 1e9, 0.25, 25e-6, 1e6);
        EXPECT_NEAR(ratio, std::sqrt(yb.mass / be.mass), 1e-12);
    }
}

TEST(CapacitanceCurve, Validation) {
    const auto yb = lookup_ion("Yb-171");
    coupling::CapacitanceSweep s;
    s.n_points = 0;
    EXPECT_THROW(coupling::coupling_vs_capacitance(yb, s), DomainError);
    s = {};
    s.C_max = s.C_min;
    EXPECT_THROW(coupling::coupling_vs_capacitance(yb, s), DomainError);
    s.n_points = 1;
    EXPECT_EQ(coupling::coupling_vs_capacitance(yb, s).size(), 1u);
}

TEST(MagneticDipole, SingleAndEnsemble) {
    coupling::MagneticDipoleInput in;
    const double want = oracle::muB * 2.0 * 0.5 * 1e-10 / (std::sqrt(2.0) * oracle::hbar);
    const double g = coupling::magnetic_dipole_coupling(in);
    EXPECT_NEAR(oracle::rel(g, want), 0.0, 1e-9);
    EXPECT_NEAR(g / (2.0 * oracle::pi), 0.98968, 1e-5);
    EXPECT_NEAR(coupling::ensemble_coupling(g, 1000000) / g, 1000.0, 1e-9);
    EXPECT_NEAR(coupling::ensemble_coupling(g, 1000000) / (2.0 * oracle::pi), 989.68, 0.01);
    EXPECT_THROW(coupling::ensemble_coupling(g, 0), DomainError);
    in.include_nuclear = true;
    in.g_I = 0.98734;
    EXPECT_LT(coupling::magnetic_dipole_coupling(in), g);
}

TEST(MagneticDipole, LinearInFieldProperty) {
    for (int i = 0; i < 500; ++i) {
        coupling::MagneticDipoleInput in;
        in.B_trans = oracle::log_uniform(1e-13, 1e-6);
        const double k = oracle::uniform(0.1, 10.0);
        auto scaled = in;
        scaled.B_trans *= k;
        EXPECT_NEAR(coupling::magnetic_dipole_coupling(scaled) / coupling::magnetic_dipole_coupling(in), k, 1e-12);
        const long long N = static_cast<long long>(oracle::log_uniform(1.0, 1e9));
        EXPECT_NEAR(coupling::ensemble_coupling(1.0, N), std::sqrt(static_cast<double>(N)), 1e-9);
    }
}

TEST(ChargeQubit, ReferenceLine) {
    const double w = 2.0 * oracle::pi * 10e9;
    const double g = coupling::charge_qubit_coupling(0.1, w, 50e-12, 10e-3);
    const double want = 0.1 * oracle::e / oracle::hbar * std::sqrt(oracle::hbar * w / (50e-12 * 10e-3));
    EXPECT_NEAR(oracle::rel(g, want), 0.0, 1e-12);
    EXPECT_NEAR(g / (2.0 * oracle::pi), 88023245.4, 1.0);
    EXPECT_NEAR(coupling::charge_qubit_coupling(0.1, w, 50e-12, 40e-3) / g, 0.5, 1e-12);
    EXPECT_NEAR(coupling::charge_qubit_coupling(0.1, 4.0 * w, 50e-12, 10e-3) / g, 2.0, 1e-12);
    EXPECT_THROW(coupling::charge_qubit_coupling(1.0, w, 50e-12, 10e-3), DomainError);
}

TEST(CavityDecay, RateFromQ) {
    EXPECT_NEAR(coupling::cavity_decay_rate(12.6e9, 1e5) / (2.0 * oracle::pi), 126000.0, 1e-6);
    EXPECT_THROW(coupling::cavity_decay_rate(12.6e9, 0.0), DomainError);
}
