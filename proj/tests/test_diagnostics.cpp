#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diracint/diagnostics.hpp>
#include <diracint/mechanics.hpp>
#include <diracint/models.hpp>

#include "test_util.hpp"

using namespace diracint;
using namespace diracint::testing;

TEST_CASE("discrete generalized energies") {
    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    const Vec q = vec({1, 0, 0.1}), v = vec({1.05, 0.1, 0}), p = vec({5, 10, -10});
    CHECK(energy_plus(hs, q, v, p) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(energy_minus(hs, q, v, p) == doctest::Approx(1.125).epsilon(1e-12));

    // v = q with a kinetic-only Lagrangian.
    const Vec r = vec({0.3, -0.6, 0.9});
    CHECK(energy_plus(hs, r, r, p) == 0.0);

    // p = 0 leaves -L_d.
    const ConfigPair pair{q, v};
    CHECK(energy_plus(hs, q, v, Vec(Vec::Zero(3))) ==
          doctest::Approx(-discrete_lagrangian(hs, pair)).epsilon(1e-14));
    CHECK(energy_minus(hs, q, v, Vec(Vec::Zero(3))) ==
          doctest::Approx(-discrete_lagrangian(hs, pair)).epsilon(1e-14));
}

TEST_CASE("Heisenberg energies are constant along the benchmark trajectory") {
    for (const Scheme scheme : {Scheme::Plus, Scheme::Minus}) {
        const DiscreteSetup hs = heisenberg_setup(scheme);
        const Trajectory traj = run(hs, vec({1, 0, 0.1}), vec({1.05, 0.1, 0}), 2000);
        double lo_p = traj.diagnostics[0].energy_plus, hi_p = lo_p;
        double lo_m = traj.diagnostics[0].energy_minus, hi_m = lo_m;
        for (const DiagRecord& d : traj.diagnostics) {
            lo_p = std::min(lo_p, d.energy_plus);
            hi_p = std::max(hi_p, d.energy_plus);
            lo_m = std::min(lo_m, d.energy_minus);
            hi_m = std::max(hi_m, d.energy_minus);
        }
        CHECK((hi_p - lo_p) / std::abs(lo_p) < 1e-12);
        CHECK((hi_m - lo_m) / std::abs(lo_m) < 1e-12);
        CHECK(lo_p == doctest::Approx(1.125).epsilon(1e-12));
    }
}

TEST_CASE("plus and minus energies on unconstrained trajectories") {
    // Kinetic-only models: the two Legendre momenta of a pair coincide, so
    // the aligned energies agree.
    const DiscreteSetup fs = free_setup(Scheme::Minus, 3, 0.1);
    const Vec q0 = vec({0.2, -0.1, 0.5}), v0 = vec({1.0, 0.4, -0.7});
    const Trajectory traj = run(fs, q0, build_q1_from_velocity(fs, q0, v0).q1, 50);
    for (const DiagRecord& d : traj.diagnostics)
        CHECK(std::abs(d.energy_plus - d.energy_minus) < 1e-10);

    // With a potential the two differ by exactly <(D1 + D2) L_d, dq> =
    // h <dL/dq, dq>; check the closed form on the oscillator.
    const DiscreteSetup os = oscillator_setup(Scheme::Minus, 0.1, 1.0);
    const Trajectory osc = run(os, vec({1.0}), vec({0.995}), 50);
    for (int k = 0; k + 1 < osc.num_points(); ++k) {
        const ConfigPair pair{osc.states[k], osc.states[k + 1]};
        const double gap = osc.diagnostics[k].energy_plus - osc.diagnostics[k].energy_minus;
        const double expected = (d1_Ld(os, pair) + d2_Ld(os, pair)).dot(pair.q1 - pair.q0);
        CHECK(gap == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("momentum series") {
    const DiscreteSetup ds = disk_setup(Scheme::Minus);
    const SolverOptions opts;
    const Trajectory traj = run(ds, vec({0, 0, 0, 1.0471976}), vec({0.005, 0.0086603, 0.01, 1.0481976}),
                                200, opts);
    const std::vector<double> p_phi = momentum_series(traj, 3);
    REQUIRE(p_phi.size() == static_cast<size_t>(traj.num_points()));
    for (size_t k = 1; k < p_phi.size(); ++k) CHECK(std::abs(p_phi[k] - p_phi[1]) <= 10.0 * opts.tol);

    const DiscreteSetup fs = free_setup(Scheme::Minus, 2, 0.05);
    const Trajectory free_traj = run(fs, vec({0, 0}), vec({0.1, -0.05}), 40);
    for (int i = 0; i < 2; ++i) {
        const std::vector<double> series = momentum_series(free_traj, i);
        for (double p : series) CHECK(p == doctest::Approx(series.front()).epsilon(1e-13));
    }

    Trajectory single;
    single.momenta = {vec({3.5, -1.0})};
    CHECK(momentum_series(single, 1) == std::vector<double>{-1.0});
    CHECK_THROWS_AS(momentum_series(single, 2), std::out_of_range);
}

TEST_CASE("symplectic residual of unconstrained discrete flows") {
    const DiscreteSetup os = oscillator_setup(Scheme::Minus, 0.1);
    CHECK(symplectic_residual(os, {vec({1}), vec({0})}, 1e-5) < 1e-6);

    const DiscreteSetup fs = free_setup(Scheme::Minus, 1, 0.1);
    CHECK(symplectic_residual(fs, {vec({0.5}), vec({1.25})}, 1e-5) < 1e-9);

    // Decoupled oscillators keep the bound in higher dimension.
    const DiscreteSetup os3 = oscillator_setup(Scheme::Minus, 0.1, 1.0, 3);
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 5; ++trial) {
        const PhaseState z{random_vec(rng, 3), random_vec(rng, 3)};
        CHECK(symplectic_residual(os3, z, 1e-5) < 1e-6);
    }

    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    CHECK_THROWS_AS(symplectic_residual(hs, {vec({0, 0, 0}), vec({0, 0, 0})}, 1e-5),
                    std::invalid_argument);
}

TEST_CASE("self-convergence order") {
    // Seeding q1 = q0 + h v0 is second-order consistent where the potential
    // gradient vanishes; the oscillator study starts at the equilibrium.
    const DiscreteSetup os = oscillator_setup(Scheme::Minus, 0.05);
    const OrderEstimate osc = self_convergence_order(os, vec({0.0}), vec({1.0}), 2.0);
    CHECK_FALSE(osc.exact_match);
    CHECK(osc.order > 1.8);
    CHECK(osc.order < 2.2);

    // A generic seed point keeps the documented floor.
    const OrderEstimate generic = self_convergence_order(os, vec({1.0}), vec({0.0}), 2.0);
    CHECK(generic.order >= 0.9);

    const DiscreteSetup fs = free_setup(Scheme::Minus, 2, 0.05);
    const OrderEstimate free_est = self_convergence_order(fs, vec({0, 0}), vec({1, -1}), 2.0);
    CHECK(free_est.exact_match);

    const DiscreteSetup ds = disk_setup(Scheme::Minus, 0.01);
    const OrderEstimate disk_est =
        self_convergence_order(ds, vec({0, 0, 0, 1.0471976}), vec({5, 8.6603, 10, 1}), 1.0);
    CHECK_FALSE(disk_est.exact_match);
    CHECK(disk_est.order >= 0.9);
}

TEST_CASE("disk energy deviation shrinks when h is halved") {
    auto max_energy_dev = [](double h) {
        const DiscreteSetup ds = disk_setup(Scheme::Minus, h);
        const Vec q0 = vec({0, 0, 0, 1.0471976});
        const Vec v0 = vec({5, 8.6603, 10, 1});
        const SeedPair seed = build_q1_from_velocity(ds, q0, v0);
        const int steps = static_cast<int>(std::lround(5.0 / h)) - 1;
        const Trajectory traj = run(ds, q0, seed.q1, steps);
        double dev = 0.0;
        for (const DiagRecord& d : traj.diagnostics)
            dev = std::max(dev, std::abs(d.energy_plus - traj.diagnostics[0].energy_plus));
        return dev;
    };
    const double coarse = max_energy_dev(0.002);
    const double fine = max_energy_dev(0.001);
    CHECK(std::isfinite(coarse));
    CHECK(coarse / fine >= 1.5);
}

TEST_CASE("Pontryagin slots collapse onto neighbour configurations") {
    const DiscreteSetup hp = heisenberg_setup(Scheme::Plus);
    const Trajectory plus = run(hp, vec({1, 0, 0.1}), vec({1.05, 0.1, 0}), 5);
    const PontryaginState sp = pontryagin_at(hp, plus, 2);
    CHECK(max_abs_diff(sp.q, plus.states[2]) == 0.0);
    CHECK(max_abs_diff(sp.v, plus.states[3]) == 0.0);
    CHECK(max_abs_diff(sp.p, plus.momenta[3]) < 1e-12);

    const DiscreteSetup hm = heisenberg_setup(Scheme::Minus);
    const Trajectory minus = run(hm, vec({1, 0, 0.1}), vec({1.05, 0.1, 0}), 5);
    const PontryaginState sm = pontryagin_at(hm, minus, 2);
    CHECK(max_abs_diff(sm.v, minus.states[1]) == 0.0);
    CHECK_THROWS_AS(pontryagin_at(hm, minus, 0), std::out_of_range);
}

TEST_CASE("structure diagnostics fill") {
    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    const Trajectory traj = run(hs, vec({1, 0, 0.1}), vec({1.05, 0.1, 0}), 10);
    const int last = traj.num_points() - 1;
    // Minus scheme windows exist at interior indices only.
    CHECK_FALSE(traj.diagnostics[0].dirac_residual_valid);
    CHECK_FALSE(traj.diagnostics[last].dirac_residual_valid);
    for (int k = 1; k < last; ++k) {
        CHECK(traj.diagnostics[k].dirac_residual_valid);
        CHECK(traj.diagnostics[k].dirac_residual < 1e-10);
        CHECK(traj.diagnostics[k].constraint_norm < 1e-11);
    }
}
