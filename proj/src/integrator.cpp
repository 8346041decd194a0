#include <diracint/constraints.hpp>
#include <diracint/diagnostics.hpp>
#include <diracint/integrator.hpp>
#include <diracint/mechanics.hpp>

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <limits>

namespace diracint {

namespace {

double ld_dot(const Vec& a, const VecL& b) {
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(acc);
}

/// Step residual, assembled from extended-precision positions. The velocity
/// arguments handed to the model evaluators are formed from long double
/// differences; the constraint pairings are accumulated in long double.
Vec step_residual(const DiscreteSetup& setup, const VecL& q_prev, const VecL& q_curr, const VecL& q_next,
                  const Vec& mu) {
    const int n = setup.model.dim_q;
    const int m = setup.model.num_constraints;
    const long double hL = static_cast<long double>(setup.h);

    const VecL v01L = (q_curr - q_prev) / hL;
    const VecL v12L = (q_next - q_curr) / hL;
    const Vec q_prev_d = to_double(q_prev);
    const Vec q_curr_d = to_double(q_curr);
    const Vec q_next_d = to_double(q_next);
    const Vec v01 = to_double(v01L);
    const Vec v12 = to_double(v12L);

    Vec r(n + m);
    Vec head = d2_Ld_qv(setup, q_prev_d, v01) + d1_Ld_qv(setup, q_curr_d, v12);
    if (m > 0) {
        const double sign = setup.scheme == Scheme::Plus ? 1.0 : -1.0;
        head -= sign * (setup.model.omega(q_curr_d).transpose() * mu);
    }
    r.head(n) = head;

    if (m > 0) {
        const Vec& base = setup.scheme == Scheme::Plus ? q_next_d : q_curr_d;
        const Mat w = setup.model.omega(base);
        for (int row = 0; row < m; ++row) {
            long double acc = 0.0L;
            for (int i = 0; i < n; ++i) acc += static_cast<long double>(w(row, i)) * v12L[i];
            r[n + row] = static_cast<double>(acc);
        }
    }
    return r;
}

/// Newton matrix per the step's regularity structure: the q_next block by
/// central differences of the residual, the multiplier block analytic.
Mat step_jacobian(const DiscreteSetup& setup, const VecL& q_prev, const VecL& q_curr, const VecL& q_next,
                  const Vec& mu) {
    const int n = setup.model.dim_q;
    const int m = setup.model.num_constraints;
    Mat jac(n + m, n + m);

    VecL probe = q_next;
    for (int j = 0; j < n; ++j) {
        const long double delta = static_cast<long double>(
            setup.fd_step * std::max(1.0, std::abs(static_cast<double>(q_next[j]))));
        probe[j] = q_next[j] + delta;
        const Vec rp = step_residual(setup, q_prev, q_curr, probe, mu);
        probe[j] = q_next[j] - delta;
        const Vec rm = step_residual(setup, q_prev, q_curr, probe, mu);
        probe[j] = q_next[j];
        jac.col(j) = (rp - rm) / static_cast<double>(2.0L * delta);
    }
    if (m > 0) {
        const double sign = setup.scheme == Scheme::Plus ? 1.0 : -1.0;
        const Mat w = setup.model.omega(to_double(q_curr));
        jac.block(0, n, n, m) = -sign * w.transpose();
        jac.block(n, n, m, m).setZero();
    }
    return jac;
}

double cond_estimate(const Mat& jac) {
    Eigen::JacobiSVD<Mat> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0.0;
    const double smin = sv[sv.size() - 1];
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv[0] / smin;
}

}  // namespace

StepResult step_core(const DiscreteSetup& setup_in, const VecL& q_prev, const VecL& q_curr,
                     const SolverOptions& opts, VecL& q_next_out) {
    // FiniteDifference mode drops the analytic gradient evaluators.
    DiscreteSetup numeric;
    if (opts.jacobian_mode == JacobianMode::FiniteDifference) {
        numeric = setup_in;
        numeric.model.grad_q = nullptr;
        numeric.model.grad_v = nullptr;
    }
    const DiscreteSetup& setup =
        opts.jacobian_mode == JacobianMode::FiniteDifference ? numeric : setup_in;
    const int n = setup.model.dim_q;
    const int m = setup.model.num_constraints;
    if (q_prev.size() != n || q_curr.size() != n) throw DimensionError("step: state dimension mismatch");
    if (opts.tol <= 0.0 || opts.max_iters < 1) throw std::invalid_argument("step: invalid solver options");
    if (m > 0) require_full_rank(setup.model, to_double(q_curr));

    VecL q_next = 2.0L * q_curr - q_prev;
    Vec mu = Vec::Zero(m);
    Vec r = step_residual(setup, q_prev, q_curr, q_next, mu);
    double rn = r.cwiseAbs().maxCoeff();

    int iters = 0;
    Mat jac;
    bool have_jac = false;
    while (rn > opts.tol && iters < opts.max_iters) {
        jac = step_jacobian(setup, q_prev, q_curr, q_next, mu);
        have_jac = true;
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible())
            throw SingularJacobian("regularity matrix numerically singular (cond ~ " +
                                   std::to_string(cond_estimate(jac)) + ")");
        const Vec delta = lu.solve(-r);

        double alpha = 1.0;
        VecL q_trial;
        Vec mu_trial, r_trial;
        double rn_trial = rn;
        for (int bt = 0; bt <= 10; ++bt) {
            q_trial = q_next + alpha * to_long(Vec(delta.head(n)));
            mu_trial = mu + alpha * delta.tail(m);
            r_trial = step_residual(setup, q_prev, q_curr, q_trial, mu_trial);
            rn_trial = r_trial.cwiseAbs().maxCoeff();
            if (rn_trial <= rn || bt == 10) break;
            alpha *= 0.5;
        }
        q_next = q_trial;
        mu = mu_trial;
        r = r_trial;
        rn = rn_trial;
        ++iters;
    }
    if (rn > opts.tol) {
        char msg[128];
        std::snprintf(msg, sizeof(msg), "Newton failed to reach tol %.3g in %d iterations (residual %.3g)",
                      opts.tol, iters, rn);
        throw NoConvergence(msg);
    }

    if (!have_jac) jac = step_jacobian(setup, q_prev, q_curr, q_next, mu);
    StepResult result;
    result.q_next = to_double(q_next);
    result.mu = mu;
    result.iters = iters;
    result.residual_norm = rn;
    result.jacobian_cond_estimate = cond_estimate(jac);
    q_next_out = q_next;
    return result;
}

StepResult step(const DiscreteSetup& setup, const Vec& q_prev, const Vec& q_curr,
                const SolverOptions& opts) {
    VecL q_next_ld;
    return step_core(setup, to_long(q_prev), to_long(q_curr), opts, q_next_ld);
}

SeedPair build_q1_from_velocity(const DiscreteSetup& setup, const Vec& q0, const Vec& v0) {
    require_same_dim(q0, v0, "build_q1_from_velocity");
    SeedPair seed;
    seed.q1 = q0 + setup.h * v0;
    seed.constraint_residual = discrete_constraint_residual(setup, {q0, seed.q1});
    return seed;
}

Vec lagrange_d_alembert_residual(const DiscreteSetup& setup, const Vec& q_prev, const Vec& q_curr,
                                 const Vec& q_next, const Vec& mu) {
    if (mu.size() != setup.model.num_constraints)
        throw DimensionError("lagrange_d_alembert_residual: mu does not match constraint count");
    return step_residual(setup, to_long(q_prev), to_long(q_curr), to_long(q_next), mu);
}

Vec lagrange_d_alembert_residual(const DiscreteSetup& setup, const VecL& q_prev, const VecL& q_curr,
                                 const VecL& q_next, const Vec& mu) {
    if (mu.size() != setup.model.num_constraints)
        throw DimensionError("lagrange_d_alembert_residual: mu does not match constraint count");
    return step_residual(setup, q_prev, q_curr, q_next, mu);
}

Trajectory run(const DiscreteSetup& setup, const Vec& q0, const Vec& q1, int n_steps,
               const SolverOptions& opts, double t0) {
    setup.validate();
    require_same_dim(q0, q1, "run");
    if (q0.size() != setup.model.dim_q) throw DimensionError("run: seed does not match model dimension");
    if (n_steps < 0) throw std::invalid_argument("run: n_steps must be >= 0");

    const int m = setup.model.num_constraints;
    const long double hL = static_cast<long double>(setup.h);

    Trajectory traj;
    traj.h = setup.h;
    traj.scheme = setup.scheme;
    traj.t0 = t0;
    {
        const Vec seed_res = discrete_constraint_residual(setup, {q0, q1});
        traj.seed_constraint_residual = seed_res.size() == 0 ? 0.0 : seed_res.cwiseAbs().maxCoeff();
    }

    std::vector<VecL> states;
    states.reserve(static_cast<size_t>(n_steps) + 2);
    states.push_back(to_long(q0));
    states.push_back(to_long(q1));
    traj.multipliers.assign(1, Vec::Zero(m));  // mu_0 placeholder
    for (int k = 1; k <= n_steps; ++k) {
        VecL q_next;
        try {
            const StepResult sr = step_core(setup, states[k - 1], states[k], opts, q_next);
            traj.multipliers.push_back(sr.mu);
            traj.newton_iters.push_back(sr.iters);
            traj.residual_norms.push_back(sr.residual_norm);
            traj.cond_estimates.push_back(sr.jacobian_cond_estimate);
        } catch (const std::exception& e) {
            throw RunError(k, e.what());
        }
        states.push_back(std::move(q_next));
    }
    traj.multipliers.push_back(Vec::Zero(m));  // mu_N placeholder

    const int num_points = static_cast<int>(states.size());
    traj.times.resize(num_points);
    traj.states.resize(num_points);
    for (int k = 0; k < num_points; ++k) {
        traj.times[k] = t0 + k * setup.h;
        traj.states[k] = to_double(states[k]);
    }
    traj.exact_states = states;

    // Momenta: p_0 from the (-)-Legendre transform of the first pair, then
    // p_k from the (+)-Legendre transform of the pair ending at k.
    traj.momenta.resize(num_points);
    {
        const Vec v01 = to_double(VecL((states[1] - states[0]) / hL));
        traj.momenta[0] = -d1_Ld_qv(setup, traj.states[0], v01);
    }
    for (int k = 1; k < num_points; ++k) {
        const Vec v = to_double(VecL((states[k] - states[k - 1]) / hL));
        traj.momenta[k] = d2_Ld_qv(setup, traj.states[k - 1], v);
    }

    // Energies from the extended-precision pairs; double differences of the
    // stored states would drown the conserved values past ~1e4 steps.
    traj.diagnostics.resize(num_points);
    for (int k = 0; k + 1 < num_points; ++k) {
        const VecL dqL = states[k + 1] - states[k];
        const Vec v = to_double(VecL(dqL / hL));
        const double ld = setup.h * setup.model.lagrangian(traj.states[k], v);
        const Vec p_plus = d2_Ld_qv(setup, traj.states[k], v);
        const Vec p_minus = -d1_Ld_qv(setup, traj.states[k], v);
        traj.diagnostics[k].energy_plus = ld_dot(p_plus, dqL) - ld;
        traj.diagnostics[k].energy_minus = ld_dot(p_minus, dqL) - ld;
    }
    if (num_points >= 2) {
        traj.diagnostics[num_points - 1].energy_plus = traj.diagnostics[num_points - 2].energy_plus;
        traj.diagnostics[num_points - 1].energy_minus = traj.diagnostics[num_points - 2].energy_minus;
    }

    fill_structure_diagnostics(setup, traj);
    return traj;
}

}  // namespace diracint
