#include <diracint/constraints.hpp>
#include <diracint/dirac.hpp>
#include <diracint/mechanics.hpp>

#include <cmath>
#include <random>

namespace diracint {

namespace {

void check_phase(const PhaseState& z, const char* where) {
    require_same_dim(z.q, z.p, where);
}

void check_triple(const PhaseTriple& t, const char* where) {
    check_phase(t.prev, where);
    check_phase(t.mid, where);
    check_phase(t.next, where);
    require_same_dim(t.prev.q, t.mid.q, where);
    require_same_dim(t.mid.q, t.next.q, where);
}

double max_abs_diff(const Vec& a, const Vec& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

CotangentProductElement kappa_d(const PhaseState& z0, const PhaseState& z1) {
    check_phase(z0, "kappa_d");
    check_phase(z1, "kappa_d");
    require_same_dim(z0.q, z1.q, "kappa_d");
    return {{z0.q, z1.q}, -z0.p, z1.p};
}

void kappa_d_inverse(const CotangentProductElement& elem, PhaseState& z0, PhaseState& z1) {
    z0 = {elem.pair_q.q0, -elem.neg_p0};
    z1 = {elem.pair_q.q1, elem.p1};
}

CotangentCotangentElement flat_plus(const PhaseTriple& triple, double h) {
    check_triple(triple, "flat_plus");
    if (h <= 0.0) throw std::invalid_argument("flat_plus: h must be positive");
    return {triple.mid.q, triple.mid.p, -(triple.next.p - triple.mid.p) / h,
            (triple.mid.q - triple.prev.q) / h};
}

CotangentCotangentElement flat_minus(const PhaseTriple& triple, double h) {
    check_triple(triple, "flat_minus");
    if (h <= 0.0) throw std::invalid_argument("flat_minus: h must be positive");
    return {triple.mid.q, triple.mid.p, -(triple.mid.p - triple.prev.p) / h,
            (triple.next.q - triple.mid.q) / h};
}

CotangentCotangentElement gamma_plus(const CotangentProductElement& elem, const PhaseTriple& context,
                                     double h) {
    PhaseState z0, z1;
    kappa_d_inverse(elem, z0, z1);
    if (max_abs_diff(z0.q, context.prev.q) > 1e-12 || max_abs_diff(z0.p, context.prev.p) > 1e-12 ||
        max_abs_diff(z1.q, context.mid.q) > 1e-12 || max_abs_diff(z1.p, context.mid.p) > 1e-12)
        throw std::invalid_argument("gamma_plus: element inconsistent with context triple");
    return flat_plus(context, h);
}

CotangentCotangentElement gamma_minus(const CotangentProductElement& elem, const PhaseTriple& context,
                                      double h) {
    PhaseState z0, z1;
    kappa_d_inverse(elem, z0, z1);
    if (max_abs_diff(z0.q, context.mid.q) > 1e-12 || max_abs_diff(z0.p, context.mid.p) > 1e-12 ||
        max_abs_diff(z1.q, context.next.q) > 1e-12 || max_abs_diff(z1.p, context.next.p) > 1e-12)
        throw std::invalid_argument("gamma_minus: element inconsistent with context triple");
    return flat_minus(context, h);
}

double pairing_plus(const CotangentCotangentElement& zeta, const PhaseState& z0, const PhaseState& z1,
                    const Vec& p2, double h) {
    if (max_abs_diff(zeta.base_q, z1.q) > 1e-12 || max_abs_diff(zeta.base_p, z1.p) > 1e-12)
        throw std::invalid_argument("pairing_plus: zeta is not based at z1");
    const Vec q_hat = (z1.q - z0.q) / h;
    const Vec p_hat = (p2 - z1.p) / h;
    return zeta.eta.dot(q_hat) + p_hat.dot(zeta.xi);
}

double pairing_minus(const CotangentCotangentElement& zeta, const PhaseState& z0, const PhaseState& z1,
                     const Vec& p_prev, double h) {
    if (max_abs_diff(zeta.base_q, z0.q) > 1e-12 || max_abs_diff(zeta.base_p, z0.p) > 1e-12)
        throw std::invalid_argument("pairing_minus: zeta is not based at z0");
    const Vec q_hat = (z1.q - z0.q) / h;
    const Vec p_hat = (z0.p - p_prev) / h;
    return zeta.eta.dot(q_hat) + p_hat.dot(zeta.xi);
}

CotangentCotangentElement dirac_differential_plus(const DiscreteSetup& setup, const Vec& q0, const Vec& v0,
                                                  const ConfigPair& next_pair) {
    require_same_dim(q0, v0, "dirac_differential_plus");
    const double h = setup.h;
    const Vec p = d2_Ld(setup, {q0, v0});
    const Vec eta = -(d2_Ld(setup, next_pair) + d1_Ld(setup, next_pair)) / h;
    return {v0, p, eta, (v0 - q0) / h};
}

CotangentCotangentElement dirac_differential_minus(const DiscreteSetup& setup, const Vec& v1, const Vec& q1,
                                                   const ConfigPair& prev_pair) {
    require_same_dim(v1, q1, "dirac_differential_minus");
    const double h = setup.h;
    const Vec p = -d1_Ld(setup, {v1, q1});
    const Vec eta = -(d2_Ld(setup, prev_pair) + d1_Ld(setup, prev_pair)) / h;
    return {v1, p, eta, (q1 - v1) / h};
}

MembershipResidual membership_residual(const DiscreteSetup& setup, const MembershipWindowL& window) {
    const long double hL = static_cast<long double>(setup.h);
    MembershipResidual res;

    // Dirac differential pieces from extended-precision pair differences.
    const Vec va = to_double(VecL((window.a1 - window.a0) / hL));
    const Vec vb = to_double(VecL((window.b1 - window.b0) / hL));
    const Vec a0 = to_double(window.a0), b0 = to_double(window.b0), b1 = to_double(window.b1);
    const Vec p_hat = (window.p_second - window.p_first) / setup.h;

    if (setup.scheme == Scheme::Plus) {
        // Differential at (q0, v0) = pair_a, hats from pair_b = (q1, v1);
        // structure anchored at q1 = pair_b.q0 with p_hat = (p_{k+2} - p_{k+1})/h.
        const Vec eta = -(d2_Ld_qv(setup, b0, vb) + d1_Ld_qv(setup, b0, vb)) / setup.h;
        const VecL q_hat = (window.b0 - window.a0) / hL;
        const Vec r = discrete_constraint_residual_qv(setup, b0, q_hat);
        res.constraint = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
        // xi = (v0 - q0)/h against q_hat = (q1 - q0)/h collapses to |v0 - q1|/h.
        res.second_order =
            static_cast<double>(((window.a1 - window.b0) / hL).cwiseAbs().maxCoeff());
        res.annihilator = annihilator_residual(setup.model, b0, eta + p_hat);
    } else {
        // Differential at (v1, q1) = pair_b, hats from pair_a = (v0, q0);
        // structure anchored at q0 = pair_a.q1 with p_hat = (p_k - p_{k-1})/h.
        const Vec eta = -(d2_Ld_qv(setup, a0, va) + d1_Ld_qv(setup, a0, va)) / setup.h;
        const VecL q_hat = (window.b1 - window.b0) / hL;
        const Vec r = discrete_constraint_residual_qv(setup, to_double(window.b0), q_hat);
        res.constraint = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
        // xi = (q1 - v1)/h against (q1 - q0)/h collapses to |q0 - v1|/h.
        res.second_order =
            static_cast<double>(((window.a1 - window.b0) / hL).cwiseAbs().maxCoeff());
        const Vec base = to_double(window.a1);
        res.annihilator = annihilator_residual(setup.model, base, eta + p_hat);
    }
    return res;
}

MembershipResidual membership_residual(const DiscreteSetup& setup, const MembershipWindow& window) {
    MembershipWindowL wide;
    wide.a0 = to_long(window.pair_a.q0);
    wide.a1 = to_long(window.pair_a.q1);
    wide.b0 = to_long(window.pair_b.q0);
    wide.b1 = to_long(window.pair_b.q1);
    wide.p_first = window.p_first;
    wide.p_second = window.p_second;
    return membership_residual(setup, wide);
}

double isotropy_samples(const DiscreteSetup& setup, const PhaseState& base, int trials, unsigned rng_seed) {
    if (trials < 1) throw std::invalid_argument("isotropy_samples: trials must be >= 1");
    check_phase(base, "isotropy_samples");
    const int n = setup.model.dim_q;
    const Mat kernel = constraint_kernel_basis(setup.model, base.q);
    const Mat wt = setup.model.omega(base.q).transpose();

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto random_vec = [&](Eigen::Index size) {
        Vec v(size);
        for (Eigen::Index i = 0; i < size; ++i) v[i] = dist(rng);
        return v;
    };

    // A structure element at the base is parametrised by a hat-velocity u in
    // ker omega, a free hat-momentum w, and an annihilator offset mu:
    //   v     ~ pair whose hats are (u, w),
    //   alpha = flat image (-w, u) + offset (wt*mu, 0).
    struct Element {
        Vec u, w, eta, xi;
    };
    auto sample = [&]() {
        Element e;
        e.u = kernel * random_vec(kernel.cols());
        e.w = random_vec(n);
        Vec offset = Vec::Zero(n);
        if (setup.model.num_constraints > 0) offset = wt * random_vec(setup.model.num_constraints);
        e.eta = -e.w + offset;
        e.xi = e.u;
        return e;
    };

    double max_abs = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Element a = sample();
        const Element b = sample();
        // <alpha_a, v_b> + <alpha_b, v_a> under the discrete pairing; the
        // hats of each pair are (u, w) by construction, same in both schemes.
        const double defect = (a.eta.dot(b.u) + b.w.dot(a.xi)) + (b.eta.dot(a.u) + a.w.dot(b.xi));
        max_abs = std::max(max_abs, std::abs(defect));
    }
    return max_abs;
}

}  // namespace diracint
