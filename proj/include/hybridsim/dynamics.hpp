#pragma once

// Exchange dynamics between the LC photon mode (a) and the ion motional mode
// (b) under the rotating-wave interaction
//     H(t)/hbar = i G e^{-i Delta t} a b^dag + h.c.,
// integrated with fixed-step RK4 on the truncated product Fock space, either
// as a pure state or as a density matrix with zero-temperature Lindblad decay
// kappa D[a] + gamma_ion D[b].

#include "hybridsim/error.hpp"
#include "hybridsim/quantities.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace hybridsim::dynamics {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double default_truncation_tolerance = 1e-6;
/// Default integration steps per 2pi/(fastest rate).
inline constexpr int default_steps_per_cycle = 1000;
/// Safety rule: dt <= max_dt_fraction * 2pi/(fastest rate).
inline constexpr double max_dt_fraction = 0.01;

enum class Representation { pure, density };

/// Product-basis index of |n_lc, n_ion> with n_trunc + 1 levels per mode.
inline int basis_index(int n_trunc, int n_lc, int n_ion) { return n_lc * (n_trunc + 1) + n_ion; }

class TwoModeState {
public:
    static TwoModeState fock(int n_trunc, int n_lc, int n_ion, Representation rep) {
        if (n_trunc < 1) throw DomainError("n_trunc must be >= 1");
        if (n_lc < 0 || n_ion < 0 || n_lc > n_trunc || n_ion > n_trunc) {
            throw DomainError("Fock state outside truncation");
        }
        TwoModeState s(n_trunc, rep);
        const int k = basis_index(n_trunc, n_lc, n_ion);
        if (rep == Representation::pure) {
            s.psi_(k) = 1.0;
        } else {
            s.rho_(k, k) = 1.0;
        }
        return s;
    }

    static TwoModeState from_vector(int n_trunc, Vector psi) {
        TwoModeState s(n_trunc, Representation::pure);
        if (psi.size() != s.dim()) throw DomainError("state vector has wrong dimension");
        s.psi_ = std::move(psi);
        return s;
    }

    static TwoModeState from_density(int n_trunc, Matrix rho) {
        TwoModeState s(n_trunc, Representation::density);
        if (rho.rows() != s.dim() || rho.cols() != s.dim()) throw DomainError("density matrix has wrong dimension");
        s.rho_ = std::move(rho);
        return s;
    }

    int n_trunc() const { return n_trunc_; }
    int levels() const { return n_trunc_ + 1; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(levels()) * levels(); }
    Representation representation() const { return rep_; }
    const Vector& vector() const { return psi_; }
    const Matrix& density() const { return rho_; }
    Vector& vector() { return psi_; }
    Matrix& density() { return rho_; }

    double population(int n_lc, int n_ion) const {
        const int k = basis_index(n_trunc_, n_lc, n_ion);
        return rep_ == Representation::pure ? std::norm(psi_(k)) : rho_(k, k).real();
    }

    /// Norm squared (pure) or trace (density).
    double trace() const {
        return rep_ == Representation::pure ? psi_.squaredNorm() : rho_.trace().real();
    }

    double mean_n_lc() const { return weighted([](int m, int) { return m; }); }
    double mean_n_ion() const { return weighted([](int, int n) { return n; }); }
    double mean_excitations() const { return weighted([](int m, int n) { return m + n; }); }
    /// Population in states touching the truncation edge.
    double edge_population() const {
        return weighted([this](int m, int n) { return (m == n_trunc_ || n == n_trunc_) ? 1 : 0; });
    }

    bool has_nan() const {
        return rep_ == Representation::pure ? !psi_.allFinite() : !rho_.allFinite();
    }

private:
    TwoModeState(int n_trunc, Representation rep) : n_trunc_(n_trunc), rep_(rep) {
        const Eigen::Index d = dim();
        if (rep == Representation::pure) {
            psi_ = Vector::Zero(d);
        } else {
            rho_ = Matrix::Zero(d, d);
        }
    }

    template <class F>
    double weighted(F f) const {
        double acc = 0.0;
        for (int m = 0; m <= n_trunc_; ++m) {
            for (int n = 0; n <= n_trunc_; ++n) acc += f(m, n) * population(m, n);
        }
        return acc;
    }

    int n_trunc_;
    Representation rep_;
    Vector psi_;
    Matrix rho_;
};

/// Mode operators on the truncated product space.
struct ModeOperators {
    Matrix a;       // LC annihilation
    Matrix b;       // ion annihilation
    Matrix a_b_dag; // a b^dag
    Matrix n_a;     // a^dag a
    Matrix n_b;     // b^dag b

    explicit ModeOperators(int n_trunc) {
        const int L = n_trunc + 1;
        const Eigen::Index d = static_cast<Eigen::Index>(L) * L;
        a = Matrix::Zero(d, d);
        b = Matrix::Zero(d, d);
        for (int m = 0; m < L; ++m) {
            for (int n = 0; n < L; ++n) {
                const int k = basis_index(n_trunc, m, n);
                if (m > 0) a(basis_index(n_trunc, m - 1, n), k) = std::sqrt(static_cast<double>(m));
                if (n > 0) b(basis_index(n_trunc, m, n - 1), k) = std::sqrt(static_cast<double>(n));
            }
        }
        a_b_dag = a * b.adjoint();
        n_a = a.adjoint() * a;
        n_b = b.adjoint() * b;
    }
};

/// H(t)/hbar = i G e^{-i Delta t} a b^dag + h.c. as a dense Hermitian matrix.
inline Matrix build_interaction(const ModeOperators& ops, double g_eff, double delta, double t) {
    const cplx c = cplx(0.0, g_eff) * std::exp(cplx(0.0, -delta * t));
    return c * ops.a_b_dag + std::conj(c) * ops.a_b_dag.adjoint();
}

inline Matrix build_interaction(double g_eff, double delta, int n_trunc, double t) {
    if (n_trunc < 1) throw DomainError("n_trunc must be >= 1");
    return build_interaction(ModeOperators(n_trunc), g_eff, delta, t);
}

struct DynamicsConfig {
    double g_eff = 0.0;     // G, rad/s
    double delta = 0.0;     // rad/s
    double kappa = 0.0;     // LC amplitude-decay rate, s^-1
    double gamma_ion = 0.0; // ion motional decay rate, s^-1
    double dt = 0.0;        // s; 0 selects default_steps_per_cycle
    double t_end = 0.0;     // s
    int record_every = 1;
    double truncation_tolerance = default_truncation_tolerance;

    double fastest_rate() const {
        return std::max({std::abs(g_eff), std::abs(delta), kappa, gamma_ion, 1e-300});
    }
    double max_dt() const { return max_dt_fraction * two_pi / fastest_rate(); }

    /// Step actually used: requested (or default) dt shrunk so t_end is hit exactly.
    double effective_dt() const {
        const double requested = dt > 0.0 ? dt : two_pi / (default_steps_per_cycle * fastest_rate());
        const double steps = std::max(1.0, std::ceil(t_end / requested - 1e-9));
        return t_end / steps;
    }

    void validate() const {
        hybridsim::detail::require_non_negative(kappa, "kappa");
        hybridsim::detail::require_non_negative(gamma_ion, "gamma_ion");
        hybridsim::detail::require_positive(t_end, "t_end");
        hybridsim::detail::require_non_negative(dt, "dt");
        if (record_every < 1) throw DomainError("record_every must be >= 1");
        if (dt > max_dt() * (1.0 + 1e-12)) {
            throw DomainError("dt exceeds 0.01 * 2pi / fastest rate (" + std::to_string(max_dt()) + " s)");
        }
    }
};

struct Sample {
    double t;
    double n_lc;
    double n_ion;
    double p_swap; // population of |0,1>
    double trace;
    double excitations;
};

struct Trajectory {
    std::vector<Sample> samples;
    TwoModeState final_state;
    double dt;
    long long steps;
};

namespace detail {

inline Sample observe(const TwoModeState& s, double t) {
    return {t, s.mean_n_lc(), s.mean_n_ion(), s.population(0, 1), s.trace(), s.mean_excitations()};
}

inline Matrix lindblad_rhs(const ModeOperators& ops, const Matrix& H, const Matrix& rho, double kappa,
                           double gamma) {
    const cplx minus_i(0.0, -1.0);
    Matrix out = minus_i * (H * rho - rho * H);
    if (kappa > 0.0) {
        out += kappa * (ops.a * rho * ops.a.adjoint() - 0.5 * (ops.n_a * rho + rho * ops.n_a));
    }
    if (gamma > 0.0) {
        out += gamma * (ops.b * rho * ops.b.adjoint() - 0.5 * (ops.n_b * rho + rho * ops.n_b));
    }
    return out;
}

} // namespace detail

/// Fixed-step RK4. Pure states ignore kappa/gamma_ion (use a density state for
/// damping). Aborts if population reaches the truncation edge or a NaN appears.
inline Trajectory evolve(TwoModeState state, const DynamicsConfig& cfg) {
    cfg.validate();
    if (state.representation() == Representation::pure && (cfg.kappa > 0.0 || cfg.gamma_ion > 0.0)) {
        throw DomainError("damping requires a density-matrix state");
    }
    const ModeOperators ops(state.n_trunc());
    const double dt = cfg.effective_dt();
    const auto n_steps = static_cast<long long>(std::llround(cfg.t_end / dt));

    auto check = [&](double t) {
        if (state.has_nan()) throw SimulationError("NaN in state at t = " + std::to_string(t) + " s");
        const double edge = state.edge_population();
        if (edge > cfg.truncation_tolerance) {
            throw SimulationError("truncation guard: edge population " + std::to_string(edge) +
                                  " exceeds tolerance at t = " + std::to_string(t) +
                                  " s; increase n_trunc");
        }
    };

    Trajectory traj{{}, state, dt, n_steps};
    check(0.0);
    traj.samples.push_back(detail::observe(state, 0.0));
    const cplx minus_i(0.0, -1.0);

    for (long long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        const Matrix H0 = build_interaction(ops, cfg.g_eff, cfg.delta, t);
        const Matrix Hh = build_interaction(ops, cfg.g_eff, cfg.delta, t + dt / 2.0);
        const Matrix H1 = build_interaction(ops, cfg.g_eff, cfg.delta, t + dt);
        if (state.representation() == Representation::pure) {
            const Vector& y = state.vector();
            const Vector k1 = minus_i * (H0 * y);
            const Vector k2 = minus_i * (Hh * (y + 0.5 * dt * k1));
            const Vector k3 = minus_i * (Hh * (y + 0.5 * dt * k2));
            const Vector k4 = minus_i * (H1 * (y + dt * k3));
            state.vector() = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            const Matrix& r = state.density();
            const Matrix k1 = detail::lindblad_rhs(ops, H0, r, cfg.kappa, cfg.gamma_ion);
            const Matrix k2 = detail::lindblad_rhs(ops, Hh, r + 0.5 * dt * k1, cfg.kappa, cfg.gamma_ion);
            const Matrix k3 = detail::lindblad_rhs(ops, Hh, r + 0.5 * dt * k2, cfg.kappa, cfg.gamma_ion);
            const Matrix k4 = detail::lindblad_rhs(ops, H1, r + dt * k3, cfg.kappa, cfg.gamma_ion);
            state.density() = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double t_next = static_cast<double>(step + 1) * dt;
        check(t_next);
        if ((step + 1) % cfg.record_every == 0 || step + 1 == n_steps) {
            traj.samples.push_back(detail::observe(state, t_next));
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

/// Single-excitation transfer probability |1,0> -> |0,1>:
/// (G^2 / Omega^2) sin^2(Omega t), Omega = sqrt(G^2 + Delta^2/4).
inline double analytic_transfer(double g_eff, double delta, double t) {
    const double omega2 = g_eff * g_eff + delta * delta / 4.0;
    if (omega2 == 0.0) return 0.0;
    const double s = std::sin(std::sqrt(omega2) * t);
    return g_eff * g_eff / omega2 * s * s;
}

/// Resonant swap time pi / (2G).
inline double swap_time(double g_eff) {
    hybridsim::detail::require_positive(std::abs(g_eff), "coupling G");
    return pi / (2.0 * std::abs(g_eff));
}

/// <0,1| rho(pi/2G) |0,1> starting from |1,0><1,0| with Lindblad damping.
/// cfg.t_end is ignored; cfg.dt is honoured when set. G = 0 gives 0.
inline double swap_fidelity_with_damping(DynamicsConfig cfg, int n_trunc = 4) {
    if (cfg.g_eff == 0.0) return 0.0;
    cfg.t_end = swap_time(cfg.g_eff);
    cfg.record_every = std::numeric_limits<int>::max();
    auto traj = evolve(TwoModeState::fock(n_trunc, 1, 0, Representation::density), cfg);
    return traj.final_state.population(0, 1);
}

} // namespace hybridsim::dynamics
