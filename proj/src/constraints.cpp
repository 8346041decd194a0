#include <diracint/constraints.hpp>

#include <Eigen/SVD>

namespace diracint {

int constraint_rank(const MechModel& model, const Vec& q, double rank_tol) {
    if (model.num_constraints == 0) return 0;
    const Mat w = model.omega(q);
    Eigen::JacobiSVD<Mat> svd(w);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    const double cutoff = rank_tol * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank;
}

void require_full_rank(const MechModel& model, const Vec& q, double rank_tol) {
    if (model.num_constraints == 0) return;
    const int rank = constraint_rank(model, q, rank_tol);
    if (rank < model.num_constraints)
        throw RankDeficientConstraint("constraint matrix has rank " + std::to_string(rank) + " < " +
                                      std::to_string(model.num_constraints) + " at queried point");
}

ConstraintEval eval_constraint(const MechModel& model, const Vec& q, double rank_tol) {
    require_full_rank(model, q, rank_tol);
    return {model.omega(q), q};
}

Vec discrete_constraint_residual_qv(const DiscreteSetup& setup, const Vec& base, const VecL& v) {
    const int m = setup.model.num_constraints;
    if (m == 0) return Vec(0);
    require_full_rank(setup.model, base);
    const Mat w = setup.model.omega(base);
    // Accumulate each row's pairing in extended precision; the products can
    // be large while the sum sits near zero.
    Vec r(m);
    for (int row = 0; row < m; ++row) {
        long double acc = 0.0L;
        for (int i = 0; i < setup.model.dim_q; ++i)
            acc += static_cast<long double>(w(row, i)) * v[i];
        r[row] = static_cast<double>(acc);
    }
    return r;
}

Vec discrete_constraint_residual_qv(const DiscreteSetup& setup, const Vec& base, const Vec& v) {
    return discrete_constraint_residual_qv(setup, base, VecL(v.cast<long double>()));
}

Vec discrete_constraint_residual(const DiscreteSetup& setup, const ConfigPair& pair) {
    require_same_dim(pair.q0, pair.q1, "discrete_constraint_residual");
    if (pair.q0.size() != setup.model.dim_q)
        throw DimensionError("discrete_constraint_residual: pair does not match model dimension");
    const Vec v = (pair.q1 - pair.q0) / setup.h;
    const Vec& base = setup.scheme == Scheme::Plus ? pair.q1 : pair.q0;
    return discrete_constraint_residual_qv(setup, base, v);
}

bool in_discrete_constraint_space(const DiscreteSetup& setup, const ConfigPair& pair, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("in_discrete_constraint_space: tol must be positive");
    const Vec r = discrete_constraint_residual(setup, pair);
    return r.size() == 0 || r.cwiseAbs().maxCoeff() <= tol;
}

Vec annihilator_covector(const MechModel& model, const Vec& q, const Vec& mu) {
    if (mu.size() != model.num_constraints)
        throw DimensionError("annihilator_covector: mu does not match constraint count");
    if (model.num_constraints == 0) return Vec::Zero(model.dim_q);
    return model.omega(q).transpose() * mu;
}

double annihilator_residual(const MechModel& model, const Vec& q, const Vec& alpha) {
    if (alpha.size() != model.dim_q)
        throw DimensionError("annihilator_residual: alpha does not match model dimension");
    if (model.num_constraints == 0) return alpha.norm();
    require_full_rank(model, q);
    const Mat wt = model.omega(q).transpose();  // n x m
    const Vec mu = wt.colPivHouseholderQr().solve(alpha);
    return (alpha - wt * mu).norm();
}

Mat constraint_kernel_basis(const MechModel& model, const Vec& q) {
    const int n = model.dim_q;
    const int m = model.num_constraints;
    if (m == 0) return Mat::Identity(n, n);
    require_full_rank(model, q);
    Eigen::JacobiSVD<Mat> svd(model.omega(q), Eigen::ComputeFullV);
    // Right singular vectors past the row rank span the kernel.
    return svd.matrixV().rightCols(n - m);
}

}  // namespace diracint
