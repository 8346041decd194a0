#include <diracint/model.hpp>

#include <cmath>
#include <random>

namespace diracint {

namespace {

Vec central_diff(const std::function<double(const Vec&)>& f, const Vec& x, double fd_step) {
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = fd_step * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

}  // namespace

Vec numeric_grad_q(const MechModel& model, const Vec& q, const Vec& v, double fd_step) {
    return central_diff([&](const Vec& x) { return model.lagrangian(x, v); }, q, fd_step);
}

Vec numeric_grad_v(const MechModel& model, const Vec& q, const Vec& v, double fd_step) {
    return central_diff([&](const Vec& x) { return model.lagrangian(q, x); }, v, fd_step);
}

Vec eval_grad_q(const MechModel& model, const Vec& q, const Vec& v, double fd_step) {
    if (model.grad_q) return model.grad_q(q, v);
    return numeric_grad_q(model, q, v, fd_step);
}

Vec eval_grad_v(const MechModel& model, const Vec& q, const Vec& v, double fd_step) {
    if (model.grad_v) return model.grad_v(q, v);
    return numeric_grad_v(model, q, v, fd_step);
}

double gradient_consistency(const MechModel& model, int probes, unsigned seed, double fd_step) {
    if (!model.has_analytic_gradients()) return 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        Vec q(model.dim_q), v(model.dim_q);
        for (int i = 0; i < model.dim_q; ++i) {
            q[i] = dist(rng);
            v[i] = dist(rng);
        }
        const Vec gq = model.grad_q(q, v), gqn = numeric_grad_q(model, q, v, fd_step);
        const Vec gv = model.grad_v(q, v), gvn = numeric_grad_v(model, q, v, fd_step);
        const double scale_q = std::max(1.0, gqn.cwiseAbs().maxCoeff());
        const double scale_v = std::max(1.0, gvn.cwiseAbs().maxCoeff());
        worst = std::max(worst, (gq - gqn).cwiseAbs().maxCoeff() / scale_q);
        worst = std::max(worst, (gv - gvn).cwiseAbs().maxCoeff() / scale_v);
    }
    return worst;
}

}  // namespace diracint
