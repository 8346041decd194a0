#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diracint/mechanics.hpp>
#include <diracint/models.hpp>

#include "test_util.hpp"

using namespace diracint;
using namespace diracint::testing;

TEST_CASE("forward finite difference map") {
    const TangentVector a = fd_map_forward({vec({0, 0}), vec({1, 2})}, 1.0);
    CHECK(max_abs_diff(a.base, vec({0, 0})) == 0.0);
    CHECK(max_abs_diff(a.velocity, vec({1, 2})) == 0.0);

    const TangentVector b = fd_map_forward({vec({1, 0, 0.1}), vec({1.05, 0.1, 0})}, 0.01);
    CHECK(max_abs_diff(b.base, vec({1, 0, 0.1})) == 0.0);
    CHECK(max_abs_diff(b.velocity, vec({5, 10, -10})) < 1e-13);

    const Vec q = vec({0.3, -0.7, 2.0});
    const TangentVector c = fd_map_forward({q, q}, 0.25);
    CHECK(c.velocity.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(fd_map_forward({vec({1}), vec({1, 2})}, 1.0), DimensionError);
}

TEST_CASE("backward finite difference map") {
    const TangentVector a = fd_map_backward({vec({0, 0}), vec({1, 2})}, 1.0);
    CHECK(max_abs_diff(a.base, vec({1, 2})) == 0.0);
    CHECK(max_abs_diff(a.velocity, vec({1, 2})) == 0.0);

    const TangentVector b = fd_map_backward({vec({1, 0, 0.1}), vec({1.05, 0.1, 0})}, 0.01);
    CHECK(max_abs_diff(b.base, vec({1.05, 0.1, 0})) == 0.0);
    CHECK(max_abs_diff(b.velocity, vec({5, 10, -10})) < 1e-13);

    const Vec q = vec({4.0, 4.0});
    CHECK(fd_map_backward({q, q}, 3.0).velocity.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward and backward maps share the velocity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const ConfigPair pair{random_vec(rng, 5, 3.0), random_vec(rng, 5, 3.0)};
        const double h = 0.001 + 0.1 * std::abs(random_vec(rng, 1)[0]);
        CHECK(max_abs_diff(fd_map_forward(pair, h).velocity, fd_map_backward(pair, h).velocity) == 0.0);
    }
}

TEST_CASE("discrete Lagrangian values") {
    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    const ConfigPair bench{vec({1, 0, 0.1}), vec({1.05, 0.1, 0})};
    CHECK(discrete_lagrangian(hs, bench) == doctest::Approx(1.125).epsilon(1e-12));

    const Vec q = vec({0.2, -0.4, 0.9});
    CHECK(discrete_lagrangian(hs, {q, q}) == 0.0);

    const DiscreteSetup ds = disk_setup(Scheme::Plus);
    const ConfigPair dp{vec({0, 0, 0, 0}), vec({0.001, 0, 0.001, 0})};
    CHECK(discrete_lagrangian(ds, dp) == doctest::Approx(0.000625).epsilon(1e-12));
}

TEST_CASE("discrete Lagrangian at rest equals -h V") {
    const DiscreteSetup ds = disk_setup(Scheme::Minus);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec q = random_vec(rng, 4, 2.0);
        // V = -10 sin(theta), so L_d(q, q) = -h V = 10 h sin(theta).
        CHECK(discrete_lagrangian(ds, {q, q}) ==
              doctest::Approx(10.0 * ds.h * std::sin(q[2])).epsilon(1e-14));
    }
}

TEST_CASE("partials of the discrete Lagrangian") {
    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    const ConfigPair bench{vec({1, 0, 0.1}), vec({1.05, 0.1, 0})};
    CHECK(max_abs_diff(d2_Ld(hs, bench), vec({5, 10, -10})) < 1e-13);

    // q-independent L: D1 = -D2 componentwise.
    const DiscreteSetup fs = free_setup(Scheme::Minus, 3, 0.05);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const ConfigPair pair{random_vec(rng, 3), random_vec(rng, 3)};
        CHECK(max_abs_diff(d1_Ld(fs, pair), Vec(-d2_Ld(fs, pair))) < 1e-12);
    }

    const DiscreteSetup os = oscillator_setup(Scheme::Minus, 0.1);
    const ConfigPair rest{vec({1}), vec({1})};
    CHECK(d1_Ld(os, rest)[0] == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(d2_Ld(os, rest)[0] == 0.0);
}

TEST_CASE("partials match finite differences of the discrete Lagrangian") {
    std::mt19937_64 rng(17);
    for (const DiscreteSetup& setup :
         {heisenberg_setup(Scheme::Minus, 0.05), disk_setup(Scheme::Plus, 0.02),
          oscillator_setup(Scheme::Minus, 0.1)}) {
        const int n = setup.model.dim_q;
        for (int trial = 0; trial < 100; ++trial) {
            const ConfigPair pair{random_vec(rng, n), random_vec(rng, n)};
            const Vec a1 = d1_Ld(setup, pair), a2 = d2_Ld(setup, pair);
            Vec f1(n), f2(n);
            for (int i = 0; i < n; ++i) {
                const double step = 1e-6 * std::max(1.0, std::abs(pair.q0[i]));
                ConfigPair p = pair, m = pair;
                p.q0[i] += step;
                m.q0[i] -= step;
                f1[i] = (discrete_lagrangian(setup, p) - discrete_lagrangian(setup, m)) / (2 * step);
                p = pair;
                m = pair;
                p.q1[i] += step;
                m.q1[i] -= step;
                f2[i] = (discrete_lagrangian(setup, p) - discrete_lagrangian(setup, m)) / (2 * step);
            }
            const double scale1 = std::max(1.0, f1.cwiseAbs().maxCoeff());
            const double scale2 = std::max(1.0, f2.cwiseAbs().maxCoeff());
            CHECK(max_abs_diff(a1, f1) / scale1 < 1e-6);
            CHECK(max_abs_diff(a2, f2) / scale2 < 1e-6);
        }
    }
}

TEST_CASE("numeric gradients agree with analytic ones") {
    for (const MechModel& model : {heisenberg(), rolling_disk(), oscillator(2.0, 3)}) {
        CHECK(gradient_consistency(model, 100, 23) < 1e-6);
    }
}

TEST_CASE("discrete Legendre transforms") {
    const DiscreteSetup hs = heisenberg_setup(Scheme::Minus);
    const ConfigPair bench{vec({1, 0, 0.1}), vec({1.05, 0.1, 0})};

    const PhaseState plus = legendre_plus(hs, bench);
    CHECK(max_abs_diff(plus.q, bench.q1) == 0.0);
    CHECK(max_abs_diff(plus.p, vec({5, 10, -10})) < 1e-13);

    const PhaseState minus = legendre_minus(hs, bench);
    CHECK(max_abs_diff(minus.q, bench.q0) == 0.0);
    CHECK(max_abs_diff(minus.p, vec({5, 10, -10})) < 1e-13);

    // Definitional identities hold bit-exactly.
    CHECK(max_abs_diff(plus.p, d2_Ld(hs, bench)) == 0.0);
    CHECK(max_abs_diff(minus.p, Vec(-d1_Ld(hs, bench))) == 0.0);
}

TEST_CASE("momentum matching along a free straight line") {
    const DiscreteSetup fs = free_setup(Scheme::Minus, 2, 0.25);
    const Vec q0 = vec({0.0, 1.0});
    const Vec dq = vec({0.5, -0.25});
    const Vec q1 = q0 + dq, q2 = q1 + dq;
    const PhaseState post = legendre_plus(fs, {q0, q1});
    const PhaseState pre = legendre_minus(fs, {q1, q2});
    CHECK(max_abs_diff(post.p, pre.p) < 1e-15);
}
