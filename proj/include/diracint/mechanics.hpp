#pragma once

#include <diracint/model.hpp>
#include <diracint/types.hpp>

namespace diracint {

/// Forward finite difference map: (q0, q1) -> (q0, (q1 - q0)/h).
TangentVector fd_map_forward(const ConfigPair& pair, double h);

/// Backward finite difference map: same velocity, based at the later point:
/// (q0, q1) -> (q1, (q1 - q0)/h).
TangentVector fd_map_backward(const ConfigPair& pair, double h);

/// Discrete Lagrangian L_d(q0, q1) = h * L(q0, (q1 - q0)/h).
double discrete_lagrangian(const DiscreteSetup& setup, const ConfigPair& pair);

/// Partial of L_d with respect to the first slot:
/// D1 L_d = h * dL/dq(q0, v) - dL/dv(q0, v), v = (q1 - q0)/h.
Vec d1_Ld(const DiscreteSetup& setup, const ConfigPair& pair);

/// Partial of L_d with respect to the second slot:
/// D2 L_d = dL/dv(q0, v), v = (q1 - q0)/h.
Vec d2_Ld(const DiscreteSetup& setup, const ConfigPair& pair);

/// Velocity-argument forms, for callers that already hold v = (q1 - q0)/h
/// to better accuracy than the positions allow recomputing.
double discrete_lagrangian_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v);
Vec d1_Ld_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v);
Vec d2_Ld_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v);

/// (+)-discrete Legendre transform: (q0, q1) -> (q1, D2 L_d(q0, q1)).
PhaseState legendre_plus(const DiscreteSetup& setup, const ConfigPair& pair);

/// (-)-discrete Legendre transform: (q0, q1) -> (q0, -D1 L_d(q0, q1)).
PhaseState legendre_minus(const DiscreteSetup& setup, const ConfigPair& pair);

}  // namespace diracint
