#include <diracint/constraints.hpp>
#include <diracint/diagnostics.hpp>
#include <diracint/mechanics.hpp>

#include <Eigen/LU>

#include <cmath>

namespace diracint {

double energy_plus(const DiscreteSetup& setup, const Vec& q_k, const Vec& v_k, const Vec& p_next) {
    require_same_dim(q_k, v_k, "energy_plus");
    require_same_dim(q_k, p_next, "energy_plus");
    return p_next.dot(v_k - q_k) - discrete_lagrangian(setup, {q_k, v_k});
}

double energy_minus(const DiscreteSetup& setup, const Vec& v_next, const Vec& q_next, const Vec& p_k) {
    require_same_dim(v_next, q_next, "energy_minus");
    require_same_dim(v_next, p_k, "energy_minus");
    return p_k.dot(q_next - v_next) - discrete_lagrangian(setup, {v_next, q_next});
}

std::vector<double> momentum_series(const Trajectory& traj, int coord_index) {
    if (traj.momenta.empty()) return {};
    if (coord_index < 0 || coord_index >= traj.momenta.front().size())
        throw std::out_of_range("momentum_series: coordinate index out of range");
    std::vector<double> series;
    series.reserve(traj.momenta.size());
    for (const Vec& p : traj.momenta) series.push_back(p[coord_index]);
    return series;
}

PontryaginState pontryagin_at(const DiscreteSetup& setup, const Trajectory& traj, int k) {
    const int last = traj.num_points() - 1;
    if (traj.scheme == Scheme::Plus) {
        if (k < 0 || k >= last) throw std::out_of_range("pontryagin_at: index lacks a next configuration");
        const ConfigPair pair{traj.states[k], traj.states[k + 1]};
        return {pair.q0, pair.q1, d2_Ld(setup, pair)};
    }
    if (k < 1 || k > last) throw std::out_of_range("pontryagin_at: index lacks a previous configuration");
    const ConfigPair pair{traj.states[k - 1], traj.states[k]};
    return {pair.q1, pair.q0, -d1_Ld(setup, pair)};
}

namespace {

/// One step of the discrete Hamiltonian map (q, p) -> (q', p') for an
/// unconstrained model: q' solves p + D1 L_d(q, q') = 0, then
/// p' = D2 L_d(q, q').
PhaseState hamiltonian_map_step(const DiscreteSetup& setup, const PhaseState& z) {
    const int n = setup.model.dim_q;
    Vec q_next = z.q + setup.h * z.p;
    auto residual = [&](const Vec& qn) { return Vec(z.p + d1_Ld(setup, {z.q, qn})); };
    Vec r = residual(q_next);
    for (int iter = 0; iter < 100 && r.cwiseAbs().maxCoeff() > 1e-14; ++iter) {
        Mat jac(n, n);
        Vec probe = q_next;
        for (int j = 0; j < n; ++j) {
            const double delta = setup.fd_step * std::max(1.0, std::abs(q_next[j]));
            probe[j] = q_next[j] + delta;
            const Vec rp = residual(probe);
            probe[j] = q_next[j] - delta;
            const Vec rm = residual(probe);
            probe[j] = q_next[j];
            jac.col(j) = (rp - rm) / (2.0 * delta);
        }
        q_next += jac.fullPivLu().solve(-r);
        r = residual(q_next);
    }
    if (r.cwiseAbs().maxCoeff() > 1e-10)
        throw NoConvergence("hamiltonian map probe step failed to converge");
    return {q_next, d2_Ld(setup, {z.q, q_next})};
}

}  // namespace

double symplectic_residual(const DiscreteSetup& setup, const PhaseState& z, double probe_eps) {
    if (setup.model.num_constraints != 0)
        throw std::invalid_argument("symplectic_residual: requires an unconstrained model");
    if (probe_eps <= 0.0) throw std::invalid_argument("symplectic_residual: probe_eps must be positive");
    const int n = setup.model.dim_q;

    auto phase_map = [&](const Vec& x) {
        const PhaseState out = hamiltonian_map_step(setup, {x.head(n), x.tail(n)});
        Vec y(2 * n);
        y << out.q, out.p;
        return y;
    };

    Vec x(2 * n);
    x << z.q, z.p;
    Mat jac(2 * n, 2 * n);
    Vec probe = x;
    for (int j = 0; j < 2 * n; ++j) {
        probe[j] = x[j] + probe_eps;
        const Vec yp = phase_map(probe);
        probe[j] = x[j] - probe_eps;
        const Vec ym = phase_map(probe);
        probe[j] = x[j];
        jac.col(j) = (yp - ym) / (2.0 * probe_eps);
    }

    Mat skew = Mat::Zero(2 * n, 2 * n);
    skew.topRightCorner(n, n) = Mat::Identity(n, n);
    skew.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return (jac.transpose() * skew * jac - skew).cwiseAbs().maxCoeff();
}

OrderEstimate self_convergence_order(const DiscreteSetup& setup, const Vec& q0, const Vec& v0,
                                     double T_final, const SolverOptions& opts) {
    auto final_config = [&](double h) {
        DiscreteSetup grid = setup;
        grid.h = h;
        const long intervals = std::lround(T_final / h);
        if (intervals < 1) throw std::invalid_argument("self_convergence_order: T_final too small");
        const SeedPair seed = build_q1_from_velocity(grid, q0, v0);
        const Trajectory traj = run(grid, q0, seed.q1, static_cast<int>(intervals - 1), opts);
        return traj.states.back();
    };

    const Vec qa = final_config(setup.h);
    const Vec qb = final_config(setup.h / 2.0);
    const Vec qc = final_config(setup.h / 4.0);
    const double d1 = (qa - qb).norm();
    const double d2 = (qb - qc).norm();

    OrderEstimate est;
    const double scale = std::max(1.0, qa.norm());
    if (d1 <= 1e3 * std::numeric_limits<double>::epsilon() * scale ||
        d2 <= 1e3 * std::numeric_limits<double>::epsilon() * scale) {
        est.exact_match = true;
        return est;
    }
    est.order = std::log2(d1 / d2);
    return est;
}

bool membership_window_available(const Trajectory& traj, int k) {
    const int last = traj.num_points() - 1;
    if (traj.scheme == Scheme::Plus) return k >= 0 && k <= last - 2;
    return k >= 1 && k <= last - 1;
}

MembershipWindow membership_window(const DiscreteSetup& setup, const Trajectory& traj, int k) {
    if (!membership_window_available(traj, k))
        throw std::out_of_range("membership_window: index lacks a complete window");
    MembershipWindow w;
    if (traj.scheme == Scheme::Plus) {
        w.pair_a = {traj.states[k], traj.states[k + 1]};
        w.pair_b = {traj.states[k + 1], traj.states[k + 2]};
        w.p_first = d2_Ld(setup, w.pair_a);
        w.p_second = d2_Ld(setup, w.pair_b);
    } else {
        w.pair_a = {traj.states[k - 1], traj.states[k]};
        w.pair_b = {traj.states[k], traj.states[k + 1]};
        w.p_first = -d1_Ld(setup, w.pair_a);
        w.p_second = -d1_Ld(setup, w.pair_b);
    }
    return w;
}

namespace {

VecL exact_state(const Trajectory& traj, int k) {
    if (static_cast<int>(traj.exact_states.size()) == traj.num_points()) return traj.exact_states[k];
    return to_long(traj.states[k]);
}

}  // namespace

MembershipResidual membership_residual_at(const DiscreteSetup& setup, const Trajectory& traj, int k) {
    if (!membership_window_available(traj, k))
        throw std::out_of_range("membership_residual_at: index lacks a complete window");
    const long double hL = static_cast<long double>(setup.h);
    MembershipWindowL w;
    if (traj.scheme == Scheme::Plus) {
        w.a0 = exact_state(traj, k);
        w.a1 = exact_state(traj, k + 1);
        w.b0 = w.a1;
        w.b1 = exact_state(traj, k + 2);
        w.p_first = d2_Ld_qv(setup, to_double(w.a0), to_double(VecL((w.a1 - w.a0) / hL)));
        w.p_second = d2_Ld_qv(setup, to_double(w.b0), to_double(VecL((w.b1 - w.b0) / hL)));
    } else {
        w.a0 = exact_state(traj, k - 1);
        w.a1 = exact_state(traj, k);
        w.b0 = w.a1;
        w.b1 = exact_state(traj, k + 1);
        w.p_first = -d1_Ld_qv(setup, to_double(w.a0), to_double(VecL((w.a1 - w.a0) / hL)));
        w.p_second = -d1_Ld_qv(setup, to_double(w.b0), to_double(VecL((w.b1 - w.b0) / hL)));
    }
    return membership_residual(setup, w);
}

void fill_structure_diagnostics(const DiscreteSetup& setup, Trajectory& traj) {
    const int num_points = traj.num_points();
    if (static_cast<int>(traj.diagnostics.size()) != num_points) traj.diagnostics.resize(num_points);
    const long double hL = static_cast<long double>(setup.h);
    for (int k = 0; k + 1 < num_points; ++k) {
        const VecL a = exact_state(traj, k), b = exact_state(traj, k + 1);
        const Vec& base = setup.scheme == Scheme::Plus ? traj.states[k + 1] : traj.states[k];
        const Vec r = discrete_constraint_residual_qv(setup, base, VecL((b - a) / hL));
        traj.diagnostics[k].constraint_norm = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
    }
    if (num_points >= 2)
        traj.diagnostics[num_points - 1].constraint_norm = traj.diagnostics[num_points - 2].constraint_norm;

    for (int k = 0; k < num_points; ++k) {
        if (!membership_window_available(traj, k)) {
            traj.diagnostics[k].dirac_residual_valid = false;
            continue;
        }
        traj.diagnostics[k].dirac_residual = membership_residual_at(setup, traj, k).max_component();
        traj.diagnostics[k].dirac_residual_valid = true;
    }
}

}  // namespace diracint
