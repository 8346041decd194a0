#pragma once

#include <diracint/model.hpp>
#include <diracint/types.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace diracint {

enum class JacobianMode { Analytic, FiniteDifference };

struct SolverOptions {
    double tol = 1e-12;       // max-norm residual threshold
    int max_iters = 50;
    JacobianMode jacobian_mode = JacobianMode::Analytic;
    double cond_warn = 1e12;  // condition-number warning threshold
};

struct StepResult {
    Vec q_next;
    Vec mu;
    int iters = 0;
    double residual_norm = 0.0;
    double jacobian_cond_estimate = 0.0;
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// The regularity matrix of the step is numerically singular.
struct SingularJacobian : std::runtime_error {
    explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

/// Step failure annotated with the index of the failing step inside run().
struct RunError : std::runtime_error {
    int step_index;
    RunError(int index, const std::string& what)
        : std::runtime_error("step " + std::to_string(index) + ": " + what), step_index(index) {}
};

struct Trajectory {
    double h = 0.0;
    Scheme scheme = Scheme::Minus;
    double t0 = 0.0;
    std::vector<double> times;
    std::vector<Vec> states;        // q_k
    std::vector<VecL> exact_states; // the stepper's extended-precision states
    std::vector<Vec> momenta;       // p_k = D2 L_d(q_{k-1}, q_k), p_0 = -D1 L_d(q_0, q_1)
    std::vector<Vec> multipliers;   // mu_k at interior points, zero at both ends
    std::vector<DiagRecord> diagnostics;
    std::vector<int> newton_iters;          // per solved step
    std::vector<double> residual_norms;     // per solved step
    std::vector<double> cond_estimates;     // per solved step
    double seed_constraint_residual = 0.0;  // violation of the (q0, q1) seed pair

    int num_points() const { return static_cast<int>(states.size()); }
};

/// Solves one step of the (+/-)-discrete Lagrange-d'Alembert equations for
/// (q_next, mu) by Newton iteration from the guess q_next = 2 q_curr - q_prev,
/// mu = 0:
///   D2 L_d(q_prev, q_curr) + D1 L_d(q_curr, q_next) -+ mu^T omega(q_curr) = 0
///   omega(b) (q_next - q_curr)/h = 0,  b = q_next (Plus) | q_curr (Minus)
/// The multiplier is reported as the coefficient in +mu^T omega for Plus and
/// -mu^T omega for Minus. A single halving backtrack is applied when the
/// residual norm increases, up to 10 times.
StepResult step(const DiscreteSetup& setup, const Vec& q_prev, const Vec& q_curr,
                const SolverOptions& opts = {});

/// Extended-precision overload used by run(); the double version widens and
/// narrows around it.
StepResult step_core(const DiscreteSetup& setup, const VecL& q_prev, const VecL& q_curr,
                     const SolverOptions& opts, VecL& q_next_out);

/// Iterates step() n_steps times from the seed pair (q0, q1), reconstructs
/// momenta, and fills per-step diagnostics. The trajectory holds
/// n_steps + 2 configuration points. A seed pair violating the discrete
/// constraint is recorded, not rejected.
Trajectory run(const DiscreteSetup& setup, const Vec& q0, const Vec& q1, int n_steps,
               const SolverOptions& opts = {}, double t0 = 0.0);

/// q1 = q0 + h v0 together with the discrete constraint residual of the
/// resulting pair. No projection is performed.
struct SeedPair {
    Vec q1;
    Vec constraint_residual;
};
SeedPair build_q1_from_velocity(const DiscreteSetup& setup, const Vec& q0, const Vec& v0);

/// Evaluates the (n + m) step residual at given data without solving; the
/// head rows carry the scheme's multiplier sign convention.
Vec lagrange_d_alembert_residual(const DiscreteSetup& setup, const Vec& q_prev, const Vec& q_curr,
                                 const Vec& q_next, const Vec& mu);

/// Widened form, for re-checking steps of long trajectories at the precision
/// they were computed at (Trajectory::exact_states).
Vec lagrange_d_alembert_residual(const DiscreteSetup& setup, const VecL& q_prev, const VecL& q_curr,
                                 const VecL& q_next, const Vec& mu);

}  // namespace diracint
