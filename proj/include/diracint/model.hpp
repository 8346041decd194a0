#pragma once

#include <diracint/types.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace diracint {

/// A constrained Lagrangian system in a single global chart R^n.
///
/// `lagrangian` evaluates L(q, v); `grad_q` / `grad_v` are optional analytic
/// partials dL/dq and dL/dv. `constraint` returns the m x n matrix whose rows
/// are the constraint one-forms at q; a null constraint means m = 0.
/// Evaluators must be pure so instances can be shared across threads.
struct MechModel {
    int dim_q = 0;
    int num_constraints = 0;

    std::function<double(const Vec&, const Vec&)> lagrangian;
    std::function<Vec(const Vec&, const Vec&)> grad_q;  // may be null
    std::function<Vec(const Vec&, const Vec&)> grad_v;  // may be null
    std::function<Mat(const Vec&)> constraint;          // null iff num_constraints == 0

    std::vector<std::string> names;
    std::map<std::string, double> params;

    bool has_analytic_gradients() const { return static_cast<bool>(grad_q) && static_cast<bool>(grad_v); }

    /// Constraint matrix at q. Returns an empty 0 x n matrix when m = 0.
    Mat omega(const Vec& q) const {
        if (num_constraints == 0) return Mat::Zero(0, dim_q);
        Mat w = constraint(q);
        if (w.rows() != num_constraints || w.cols() != dim_q)
            throw DimensionError("MechModel::omega: constraint matrix has wrong shape");
        return w;
    }
};

/// A model paired with a step size and a (+)/(-) scheme selector.
struct DiscreteSetup {
    MechModel model;
    double h = 0.0;
    Scheme scheme = Scheme::Minus;
    double fd_step = 1e-6;  // base step for numeric derivatives

    void validate() const {
        if (h <= 0.0) throw std::invalid_argument("DiscreteSetup: h must be positive");
        if (fd_step <= 0.0) throw std::invalid_argument("DiscreteSetup: fd_step must be positive");
        if (model.dim_q <= 0) throw std::invalid_argument("DiscreteSetup: model dimension must be positive");
        if (model.num_constraints > 0 && model.num_constraints >= model.dim_q)
            throw std::invalid_argument("DiscreteSetup: need m < n for m > 0");
    }
};

/// Numeric dL/dq by central differences, step fd_step * max(1, |q_i|) per component.
Vec numeric_grad_q(const MechModel& model, const Vec& q, const Vec& v, double fd_step);

/// Numeric dL/dv by central differences.
Vec numeric_grad_v(const MechModel& model, const Vec& q, const Vec& v, double fd_step);

/// dL/dq using the analytic evaluator when present, else central differences.
Vec eval_grad_q(const MechModel& model, const Vec& q, const Vec& v, double fd_step);

/// dL/dv using the analytic evaluator when present, else central differences.
Vec eval_grad_v(const MechModel& model, const Vec& q, const Vec& v, double fd_step);

/// Largest relative deviation between analytic and numeric gradients over
/// `probes` random (q, v) samples. Returns 0 for models without analytic
/// gradients.
double gradient_consistency(const MechModel& model, int probes, unsigned seed, double fd_step = 1e-6);

}  // namespace diracint
