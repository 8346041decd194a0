#pragma once

#include <diracint/model.hpp>
#include <diracint/types.hpp>

namespace diracint {

/// Default relative singular-value cutoff for numerical rank decisions.
constexpr double kRankTol = 1e-10;

/// Constraint one-forms evaluated at a specific configuration: rows of
/// omega are the covectors, base_q the evaluation point.
struct ConstraintEval {
    Mat omega;
    Vec base_q;
};

/// Evaluates omega(q) and verifies full row rank.
ConstraintEval eval_constraint(const MechModel& model, const Vec& q, double rank_tol = kRankTol);

/// Scheme-dependent residual of the discrete constraint space:
/// Plus  -> omega(q1) * (q1 - q0)/h,
/// Minus -> omega(q0) * (q1 - q0)/h.
/// Zero vector iff the pair lies in the discrete constraint space.
/// Throws RankDeficientConstraint if omega loses row rank at the base point.
Vec discrete_constraint_residual(const DiscreteSetup& setup, const ConfigPair& pair);

/// Velocity-argument form; v stands for (q1 - q0)/h and `base` is the
/// scheme's base point (q1 for Plus, q0 for Minus).
Vec discrete_constraint_residual_qv(const DiscreteSetup& setup, const Vec& base, const Vec& v);

/// Widened velocity form for trajectories carried in extended precision.
Vec discrete_constraint_residual_qv(const DiscreteSetup& setup, const Vec& base, const VecL& v);

/// True iff the max-norm of the residual is <= tol.
bool in_discrete_constraint_space(const DiscreteSetup& setup, const ConfigPair& pair, double tol);

/// mu^T * omega(q): the annihilator covector with coefficients mu.
Vec annihilator_covector(const MechModel& model, const Vec& q, const Vec& mu);

/// Norm of the component of alpha orthogonal to the row space of omega(q),
/// via least-squares projection. Zero iff alpha lies in the annihilator.
/// For m = 0 the annihilator is {0}, so the residual is |alpha|.
double annihilator_residual(const MechModel& model, const Vec& q, const Vec& alpha);

/// Orthonormal basis of ker omega(q) as columns of an n x (n - m) matrix.
/// Identity for m = 0.
Mat constraint_kernel_basis(const MechModel& model, const Vec& q);

/// Numerical row rank of omega(q) with cutoff rank_tol * sigma_max.
int constraint_rank(const MechModel& model, const Vec& q, double rank_tol = kRankTol);

/// Throws RankDeficientConstraint unless omega(q) has full row rank.
void require_full_rank(const MechModel& model, const Vec& q, double rank_tol = kRankTol);

}  // namespace diracint
