#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diracint/constraints.hpp>
#include <diracint/models.hpp>

#include "test_util.hpp"

using namespace diracint;
using namespace diracint::testing;

namespace {

/// Constant-coefficient constraint in R^3: rows (1, 0, 1) and (0, 1, -1).
MechModel linear_constraint_model() {
    MechModel model = free_particle(3);
    model.num_constraints = 2;
    model.constraint = [](const Vec&) {
        Mat w(2, 3);
        w << 1, 0, 1, 0, 1, -1;
        return w;
    };
    return model;
}

/// Duplicated rows: rank 1 out of a claimed 2.
MechModel degenerate_constraint_model() {
    MechModel model = free_particle(3);
    model.num_constraints = 2;
    model.constraint = [](const Vec&) {
        Mat w(2, 3);
        w << 1, 1, 0, 1, 1, 0;
        return w;
    };
    return model;
}

}  // namespace

TEST_CASE("discrete constraint residual at the benchmark seed pair") {
    const ConfigPair bench{vec({1, 0, 0.1}), vec({1.05, 0.1, 0})};

    const Vec rm = discrete_constraint_residual(heisenberg_setup(Scheme::Minus), bench);
    REQUIRE(rm.size() == 1);
    CHECK(std::abs(rm[0]) < 1e-13);

    const Vec rp = discrete_constraint_residual(heisenberg_setup(Scheme::Plus), bench);
    REQUIRE(rp.size() == 1);
    CHECK(std::abs(rp[0]) < 1e-13);

    const Vec q = vec({0.4, -0.2, 1.1});
    const Vec rz = discrete_constraint_residual(heisenberg_setup(Scheme::Minus), {q, q});
    CHECK(rz.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("membership threshold wrapper") {
    const DiscreteSetup hm = heisenberg_setup(Scheme::Minus);
    CHECK(in_discrete_constraint_space(hm, {vec({1, 0, 0.1}), vec({1.05, 0.1, 0})}, 1e-12));

    DiscreteSetup unit = heisenberg_setup(Scheme::Minus, 1.0);
    CHECK_FALSE(in_discrete_constraint_space(unit, {vec({0, 0, 0}), vec({0, 0, 1})}, 1e-12));

    const Vec q = vec({2.0, 3.0, -1.0});
    CHECK(in_discrete_constraint_space(hm, {q, q}, 1e-15));

    CHECK_THROWS_AS(in_discrete_constraint_space(hm, {q, q}, 0.0), std::invalid_argument);
}

TEST_CASE("annihilator covectors") {
    const MechModel h = heisenberg();
    CHECK(max_abs_diff(annihilator_covector(h, vec({1, 0, 0.1}), vec({1})), vec({0, 1, 1})) == 0.0);
    CHECK(annihilator_covector(h, vec({0.3, 0.7, 0.2}), vec({0})).cwiseAbs().maxCoeff() == 0.0);

    const MechModel d = rolling_disk();
    const Vec q = vec({0.5, -0.5, 0.2, 0.0});  // phi = 0
    CHECK(max_abs_diff(annihilator_covector(d, q, vec({1, 0})), vec({1, 0, -1, 0})) == 0.0);
}

TEST_CASE("annihilator residual") {
    const MechModel h = heisenberg();
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec q = random_vec(rng, 3, 2.0);
        const Vec mu = random_vec(rng, 1, 5.0);
        CHECK(annihilator_residual(h, q, annihilator_covector(h, q, mu)) < 1e-12);
    }
    CHECK(annihilator_residual(h, vec({0, 0, 0}), vec({1, 0, 0})) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(annihilator_residual(h, vec({0.2, 0.4, 0.8}), Vec(Vec::Zero(3))) == 0.0);

    const MechModel d = rolling_disk();
    for (int trial = 0; trial < 100; ++trial) {
        const Vec q = random_vec(rng, 4, 2.0);
        const Vec mu = random_vec(rng, 2, 5.0);
        CHECK(annihilator_residual(d, q, annihilator_covector(d, q, mu)) < 1e-12);
    }
}

TEST_CASE("residual is linear in the configuration difference") {
    const DiscreteSetup hm = heisenberg_setup(Scheme::Minus, 0.05);
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec q0 = random_vec(rng, 3, 2.0);
        const Vec da = random_vec(rng, 3), db = random_vec(rng, 3);
        const double a = random_vec(rng, 1, 3.0)[0], b = random_vec(rng, 1, 3.0)[0];
        const Vec lhs = discrete_constraint_residual(hm, {q0, Vec(q0 + a * da + b * db)});
        const Vec rhs = a * discrete_constraint_residual(hm, {q0, Vec(q0 + da)}) +
                        b * discrete_constraint_residual(hm, {q0, Vec(q0 + db)});
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("schemes agree for configuration-independent constraints") {
    const MechModel model = linear_constraint_model();
    const DiscreteSetup plus{model, 0.02, Scheme::Plus};
    const DiscreteSetup minus{model, 0.02, Scheme::Minus};
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const ConfigPair pair{random_vec(rng, 3, 2.0), random_vec(rng, 3, 2.0)};
        CHECK(max_abs_diff(discrete_constraint_residual(plus, pair),
                           discrete_constraint_residual(minus, pair)) == 0.0);
    }
}

TEST_CASE("rank deficiency is an error") {
    const MechModel bad = degenerate_constraint_model();
    const DiscreteSetup setup{bad, 0.1, Scheme::Minus};
    CHECK_THROWS_AS(discrete_constraint_residual(setup, {vec({0, 0, 0}), vec({1, 0, 0})}),
                    RankDeficientConstraint);
    CHECK_THROWS_AS(annihilator_residual(bad, vec({0, 0, 0}), vec({1, 0, 0})), RankDeficientConstraint);
}

TEST_CASE("kernel basis spans the admissible velocities") {
    std::mt19937_64 rng(43);
    for (const MechModel& model : {heisenberg(), rolling_disk()}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Vec q = random_vec(rng, model.dim_q, 2.0);
            const Mat kernel = constraint_kernel_basis(model, q);
            CHECK(kernel.cols() == model.dim_q - model.num_constraints);
            CHECK((model.omega(q) * kernel).cwiseAbs().maxCoeff() < 1e-13);
            CHECK((kernel.transpose() * kernel - Mat::Identity(kernel.cols(), kernel.cols()))
                      .cwiseAbs()
                      .maxCoeff() < 1e-13);
        }
    }
}
