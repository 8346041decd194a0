#include <diracint/mechanics.hpp>

namespace diracint {

namespace {

void check_pair(const DiscreteSetup& setup, const ConfigPair& pair, const char* where) {
    require_same_dim(pair.q0, pair.q1, where);
    if (pair.q0.size() != setup.model.dim_q)
        throw DimensionError(std::string(where) + ": pair does not match model dimension");
}

}  // namespace

TangentVector fd_map_forward(const ConfigPair& pair, double h) {
    require_same_dim(pair.q0, pair.q1, "fd_map_forward");
    if (h <= 0.0) throw std::invalid_argument("fd_map_forward: h must be positive");
    return {pair.q0, (pair.q1 - pair.q0) / h};
}

TangentVector fd_map_backward(const ConfigPair& pair, double h) {
    require_same_dim(pair.q0, pair.q1, "fd_map_backward");
    if (h <= 0.0) throw std::invalid_argument("fd_map_backward: h must be positive");
    return {pair.q1, (pair.q1 - pair.q0) / h};
}

double discrete_lagrangian_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v) {
    return setup.h * setup.model.lagrangian(q0, v);
}

Vec d1_Ld_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v) {
    return setup.h * eval_grad_q(setup.model, q0, v, setup.fd_step) -
           eval_grad_v(setup.model, q0, v, setup.fd_step);
}

Vec d2_Ld_qv(const DiscreteSetup& setup, const Vec& q0, const Vec& v) {
    return eval_grad_v(setup.model, q0, v, setup.fd_step);
}

double discrete_lagrangian(const DiscreteSetup& setup, const ConfigPair& pair) {
    check_pair(setup, pair, "discrete_lagrangian");
    return discrete_lagrangian_qv(setup, pair.q0, (pair.q1 - pair.q0) / setup.h);
}

Vec d1_Ld(const DiscreteSetup& setup, const ConfigPair& pair) {
    check_pair(setup, pair, "d1_Ld");
    return d1_Ld_qv(setup, pair.q0, (pair.q1 - pair.q0) / setup.h);
}

Vec d2_Ld(const DiscreteSetup& setup, const ConfigPair& pair) {
    check_pair(setup, pair, "d2_Ld");
    return d2_Ld_qv(setup, pair.q0, (pair.q1 - pair.q0) / setup.h);
}

PhaseState legendre_plus(const DiscreteSetup& setup, const ConfigPair& pair) {
    return {pair.q1, d2_Ld(setup, pair)};
}

PhaseState legendre_minus(const DiscreteSetup& setup, const ConfigPair& pair) {
    return {pair.q0, -d1_Ld(setup, pair)};
}

}  // namespace diracint
