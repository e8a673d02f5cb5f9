#include "hybridsim/dynamics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace hybridsim;
using dynamics::Representation;
using dynamics::TwoModeState;

namespace {

const double G_ref = 2.0 * oracle::pi * 35323.67;

/// Single-excitation transfer from a hand-solved 2x2 problem in the frame
/// rotating at Delta/2: P = (G/W)^2 sin^2(W t), W = sqrt(G^2 + Delta^2/4).
double transfer_oracle(double G, double D, double t) {
    const double W = std::sqrt(G * G + D * D / 4.0);
    return std::pow(G / W * std::sin(W * t), 2);
}

dynamics::DynamicsConfig config(double G, double D, double t_end, double dt = 0.0) {
    dynamics::DynamicsConfig c;
    c.g_eff = G;
    c.delta = D;
    c.t_end = t_end;
    c.dt = dt;
    return c;
}

} // namespace

TEST(Interaction, ZeroCoupling) {
    EXPECT_EQ(dynamics::build_interaction(0.0, 1e3, 3, 0.5).norm(), 0.0);
    EXPECT_THROW(dynamics::build_interaction(1.0, 0.0, 0, 0.0), DomainError);
}

TEST(Interaction, SingleExcitationBlock) {
    const double G = 2.5;
    const auto H = dynamics::build_interaction(G, 0.0, 1, 0.0);
    const int k10 = dynamics::basis_index(1, 1, 0);
    const int k01 = dynamics::basis_index(1, 0, 1);
    // <0,1| i G a b^dag |1,0> = i G
    EXPECT_NEAR(std::abs(H(k01, k10) - dynamics::cplx(0.0, G)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H(k10, k01) - dynamics::cplx(0.0, -G)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H(k10, k10)) + std::abs(H(k01, k01)), 0.0, 1e-15);
}

TEST(Interaction, HermitianAndNormIndependentOfTime) {
    for (int i = 0; i < 100; ++i) {
        const double G = oracle::uniform(-5.0, 5.0);
        const double D = oracle::uniform(-20.0, 20.0);
        const auto H0 = dynamics::build_interaction(G, D, 3, 0.0);
        const auto H = dynamics::build_interaction(G, D, 3, oracle::uniform(0.0, 10.0));
        EXPECT_LT((H - H.adjoint()).norm(), 1e-12);
        EXPECT_NEAR(H.norm(), H0.norm(), 1e-12 * (1.0 + H0.norm()));
    }
}

TEST(Evolve, NormAndExcitationsConservedOverManySteps) {
    auto cfg = config(G_ref, 0.4 * G_ref, 10.0 * 2.0 * oracle::pi / G_ref);
    cfg.record_every = 50;
    dynamics::Vector psi = dynamics::Vector::Zero(16);
    psi(dynamics::basis_index(3, 1, 0)) = std::sqrt(0.7);
    psi(dynamics::basis_index(3, 0, 1)) = dynamics::cplx(0.0, std::sqrt(0.3));
    cfg.truncation_tolerance = 1.0; // no two-excitation states are populated
    const auto traj = dynamics::evolve(TwoModeState::from_vector(3, psi), cfg);
    EXPECT_GE(traj.steps, 10000);
    for (const auto& s : traj.samples) {
        EXPECT_NEAR(s.trace, 1.0, 1e-9);
        EXPECT_NEAR(s.excitations, 1.0, 1e-9);
    }
}

TEST(Evolve, TwoExcitationManifoldConserved) {
    auto cfg = config(G_ref, 0.0, 3.0 * dynamics::swap_time(G_ref));
    cfg.truncation_tolerance = 1.0;
    const auto traj = dynamics::evolve(TwoModeState::fock(4, 1, 1, Representation::pure), cfg);
    for (const auto& s : traj.samples) EXPECT_NEAR(s.excitations, 2.0, 1e-9);
}

TEST(Evolve, MatchesAnalyticTransferOverGrid) {
    for (double G : {2.0 * oracle::pi * 5e3, G_ref, 2.0 * oracle::pi * 120e3}) {
        for (double ratio : {0.0, 0.5, 1.0, 3.0}) {
            const double D = ratio * G;
            auto cfg = config(G, D, 4.0 * dynamics::swap_time(G));
            cfg.record_every = 37;
            const auto traj = dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::pure), cfg);
            for (const auto& s : traj.samples) {
                EXPECT_NEAR(s.p_swap, transfer_oracle(G, D, s.t), 1e-6) << G << " " << D << " " << s.t;
                EXPECT_NEAR(dynamics::analytic_transfer(G, D, s.t), transfer_oracle(G, D, s.t), 1e-14);
            }
        }
    }
}

TEST(Evolve, RandomGridProperty) {
    for (int i = 0; i < 10; ++i) {
        const double G = oracle::log_uniform(1e3, 1e6);
        const double D = oracle::uniform(-4.0, 4.0) * G;
        const double t = oracle::uniform(0.1, 6.0) / G;
        const auto traj = dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::density), config(G, D, t));
        EXPECT_NEAR(traj.final_state.population(0, 1), transfer_oracle(G, D, t), 1e-6);
    }
}

TEST(Evolve, FourthOrderConvergence) {
    const double G = 1.0, D = 1.3, t_end = 3.0;
    const double dt = 0.01 * 2.0 * oracle::pi / D;
    auto err = [&](double step) {
        const auto traj = dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::pure), config(G, D, t_end, step));
        return std::abs(traj.final_state.population(0, 1) - transfer_oracle(G, D, t_end));
    };
    const double ratio = err(dt) / err(dt / 2.0);
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(Evolve, ResonantSwapFidelity) {
    const double t = dynamics::swap_time(G_ref);
    EXPECT_NEAR(t, oracle::pi / (2.0 * G_ref), 1e-20);
    const auto traj = dynamics::evolve(TwoModeState::fock(3, 1, 0, Representation::pure), config(G_ref, 0.0, t));
    EXPECT_GE(traj.final_state.population(0, 1), 0.999);
    EXPECT_NEAR(traj.final_state.population(0, 1), 1.0, 1e-9);
    EXPECT_NEAR(traj.samples.back().t, t, 1e-18);
}

TEST(Evolve, DampedSwapFidelity) {
    auto cfg = config(G_ref, 0.0, 0.0);
    cfg.gamma_ion = 1e3;
    const double f = dynamics::swap_fidelity_with_damping(cfg, 3);
    EXPECT_GE(f, 0.99);
    // single-excitation decay of the ion mode while it is being filled
    EXPECT_NEAR(f, 0.99647, 1e-4);
    EXPECT_LT(f, 1.0);
    cfg.g_eff = 0.0;
    EXPECT_EQ(dynamics::swap_fidelity_with_damping(cfg, 3), 0.0);
}

TEST(Evolve, DensityMatrixStaysPhysical) {
    for (int i = 0; i < 5; ++i) {
        auto cfg = config(G_ref, oracle::uniform(-2.0, 2.0) * G_ref, 2.0 * dynamics::swap_time(G_ref));
        cfg.kappa = oracle::uniform(0.0, 0.5) * G_ref;
        cfg.gamma_ion = oracle::uniform(0.0, 0.5) * G_ref;
        cfg.record_every = 100;
        const auto traj = dynamics::evolve(TwoModeState::fock(3, 1, 0, Representation::density), cfg);
        const auto& rho = traj.final_state.density();
        EXPECT_NEAR(traj.final_state.trace(), 1.0, 1e-9);
        EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
        Eigen::SelfAdjointEigenSolver<dynamics::Matrix> es(0.5 * (rho + rho.adjoint()));
        // RK4 is not positivity preserving; empty directions pick up integration error
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-9);
        double prev = 2.0;
        for (const auto& s : traj.samples) {
            EXPECT_LE(s.excitations, prev + 1e-12);
            prev = s.excitations;
        }
    }
}

TEST(Evolve, TruncationGuard) {
    auto cfg = config(G_ref, 0.0, 2.0 * dynamics::swap_time(G_ref));
    EXPECT_THROW(dynamics::evolve(TwoModeState::fock(2, 1, 1, Representation::pure), cfg), SimulationError);
    EXPECT_THROW(dynamics::evolve(TwoModeState::fock(1, 1, 0, Representation::pure), cfg), SimulationError);
    EXPECT_NO_THROW(dynamics::evolve(TwoModeState::fock(3, 1, 1, Representation::pure), config(G_ref, 0.0, 0.1 / G_ref)));
}

TEST(Evolve, Validation) {
    auto cfg = config(G_ref, 0.0, 1e-5);
    cfg.kappa = 1e3;
    EXPECT_THROW(dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::pure), cfg), DomainError);
    auto big = config(G_ref, 0.0, 1e-5, 1.0);
    EXPECT_THROW(dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::pure), big), DomainError);
    EXPECT_THROW(dynamics::evolve(TwoModeState::fock(2, 1, 0, Representation::pure), config(G_ref, 0.0, 0.0)), DomainError);
    EXPECT_THROW(TwoModeState::fock(2, 3, 0, Representation::pure), DomainError);
    EXPECT_THROW(TwoModeState::fock(0, 0, 0, Representation::pure), DomainError);
}
