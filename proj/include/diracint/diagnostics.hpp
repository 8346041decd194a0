#pragma once

#include <diracint/dirac.hpp>
#include <diracint/integrator.hpp>
#include <diracint/model.hpp>
#include <diracint/types.hpp>

#include <vector>

namespace diracint {

/// (+)-discrete generalized energy: <p_next, v_k - q_k> - L_d(q_k, v_k).
double energy_plus(const DiscreteSetup& setup, const Vec& q_k, const Vec& v_k, const Vec& p_next);

/// (-)-discrete generalized energy: <p_k, q_next - v_next> - L_d(v_next, q_next).
double energy_minus(const DiscreteSetup& setup, const Vec& v_next, const Vec& q_next, const Vec& p_k);

/// p_k[coord_index] for all k.
std::vector<double> momentum_series(const Trajectory& traj, int coord_index);

/// Pontryagin slots at index k of a trajectory: on solutions the velocity
/// slot collapses onto the neighbour configuration (v_k = q_{k+1} for Plus,
/// v_k = q_{k-1} for Minus) and the momentum is the scheme's Legendre value.
PontryaginState pontryagin_at(const DiscreteSetup& setup, const Trajectory& traj, int k);

/// Max-norm of D^T J D - J where D is the central-difference Jacobian of the
/// one-step discrete Hamiltonian map at z and J the canonical skew matrix.
/// Requires an unconstrained model. Near zero certifies symplecticity.
double symplectic_residual(const DiscreteSetup& setup, const PhaseState& z, double probe_eps);

struct OrderEstimate {
    double order = 0.0;
    bool exact_match = false;  // grids agree to rounding; no order is inferred
};

/// Self-convergence order from the grids h, h/2, h/4 started from the same
/// (q0, v0) seed: log2(|Q_h - Q_{h/2}| / |Q_{h/2} - Q_{h/4}|) on the final
/// configuration at time T_final.
OrderEstimate self_convergence_order(const DiscreteSetup& setup, const Vec& q0, const Vec& v0,
                                     double T_final, const SolverOptions& opts = {});

/// Builds the scheme's membership window around interior index k of a
/// trajectory, with the momenta recomputed from the configuration pairs by
/// the scheme's own Legendre transform (D2 L_d for Plus, -D1 L_d for Minus).
/// Valid k: [0, N-2] for Plus and [1, N-1] for Minus, where N is the last
/// point index.
MembershipWindow membership_window(const DiscreteSetup& setup, const Trajectory& traj, int k);

/// True iff index k admits a membership window under the trajectory's scheme.
bool membership_window_available(const Trajectory& traj, int k);

/// Membership residual at index k, evaluated from the trajectory's
/// extended-precision states when present (falling back to the stored
/// doubles, whose rounding drowns the certified quantities on long runs).
MembershipResidual membership_residual_at(const DiscreteSetup& setup, const Trajectory& traj, int k);

/// Fills constraint_norm and the Dirac membership residual for every point of
/// the trajectory (energies are filled by run() itself, which still holds the
/// extended-precision states). Row k describes the pair (q_k, q_{k+1}); the
/// last row repeats the final pair.
void fill_structure_diagnostics(const DiscreteSetup& setup, Trajectory& traj);

}  // namespace diracint
