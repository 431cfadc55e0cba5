#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "saari/dynamics.hpp"

using namespace saari;

namespace {

// Circular two-body orbit, unit masses, separation d: each body at radius
// d/2 moving with speed w d/2, w^2 = 2 / d^3.
struct Circular {
    Configuration q, v;
    double period;
};

Circular circular(double d) {
    const double w = std::sqrt(2.0 / (d * d * d));
    return {Configuration(2, {d / 2, 0, -d / 2, 0}), Configuration(2, {0, w * d / 2, 0, -w * d / 2}),
            2.0 * oracle::kPi / w};
}

}  // namespace

TEST_CASE("force function, inertia and energies on a unit pair") {
    const MassSystem ms({1.0, 1.0});
    const Configuration q(2, {0.5, 0.0, -0.5, 0.0});
    CHECK(force_function(q, ms) == doctest::Approx(1.0));
    CHECK(moment_of_inertia(q, ms) == doctest::Approx(0.5));
    const Configuration v(2, {0.0, 1.0, 0.0, -1.0});
    const auto e = energies(q, v, ms);
    CHECK(e.kinetic == doctest::Approx(1.0));
    CHECK(e.lagrangian == doctest::Approx(2.0));
    CHECK(e.total == doctest::Approx(0.0));
    CHECK(angular_momentum(q, v, ms) == doctest::Approx(1.0));
}

TEST_CASE("force function errors") {
    const MassSystem ms({1.0, 1.0});
    CHECK_THROWS_AS(force_function(Configuration(2, {1, 1, 1, 1}), ms), CollisionError);
    CHECK_THROWS_AS(force_function(Configuration(2, {1, 1, 1, 1, 2, 2}), ms), DimensionMismatch);
}

TEST_CASE("newton_rhs matches finite differences of U") {
    oracle::Gen g(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 6));
        const int dim = g.integer(1, 3);
        const auto m = g.uniforms(n, 0.3, 3.0);
        const auto c = g.uniforms(n * dim, -2.0, 2.0);
        const MassSystem ms(m, dim);
        const Configuration q(dim, c);
        if (min_pairwise_distance(q) < 0.05) continue;
        const Configuration a = newton_rhs(q, ms);
        for (std::size_t k = 0; k < n * dim; ++k) {
            const double fd = oracle::dU_fd(c, m, dim, k, 1e-5);
            const double ma = m[k / dim] * a.coords()[k];
            CHECK(std::abs(ma - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("U is homogeneous of degree -1 and I of degree 2") {
    oracle::Gen g(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 6));
        const MassSystem ms(g.uniforms(n, 0.1, 2.0));
        const Configuration q(2, g.uniforms(2 * n, -1.0, 1.0));
        const double s = g.uniform(0.1, 10.0);
        CHECK(force_function(q.scaled(s), ms) == doctest::Approx(force_function(q, ms) / s).epsilon(1e-12));
        CHECK(moment_of_inertia(q.scaled(s), ms) == doctest::Approx(s * s * moment_of_inertia(q, ms)).epsilon(1e-12));
    }
}

TEST_CASE("Yoshida4 returns to the start of a circular orbit after one period") {
    const MassSystem ms({1.0, 1.0});
    const Circular c = circular(1.0);
    IntegrateOptions o;
    o.steps = 4096;
    o.dt = c.period / o.steps;
    o.record_every = 4096;
    const auto traj = integrate(c.q, c.v, ms, o);
    REQUIRE(traj.size() == 2);
    double err = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        err += std::pow(traj.states[1].positions.coords()[k] - c.q.coords()[k], 2);
        err += std::pow(traj.states[1].velocities.coords()[k] - c.v.coords()[k], 2);
        norm += std::pow(c.q.coords()[k], 2) + std::pow(c.v.coords()[k], 2);
    }
    CHECK(std::sqrt(err / norm) < 1e-6);
}

TEST_CASE("energy drift over ten circular periods stays below 1e-8") {
    const MassSystem ms({1.0, 1.0});
    const Circular c = circular(1.0);
    IntegrateOptions o;
    o.steps = 10 * 4096;
    o.dt = c.period / 4096;
    o.record_every = 64;
    const auto traj = integrate(c.q, c.v, ms, o);
    const double e0 = energies(c.q, c.v, ms).total;
    double drift = 0.0;
    for (const auto& st : traj.states)
        drift = std::max(drift, std::abs(energies(st.positions, st.velocities, ms).total - e0) / std::abs(e0));
    CHECK(drift < 1e-8);
}

TEST_CASE("integration is reproducible bit for bit") {
    const MassSystem ms({1.0, 2.0, 0.5});
    const Configuration q(2, {1, 0, -0.5, 0.3, 0.2, -1.1});
    const Configuration v(2, {0, 0.4, -0.1, 0, 0.3, 0.2});
    IntegrateOptions o;
    o.steps = 500;
    o.dt = 1e-3;
    for (auto scheme : {Integrator::Verlet, Integrator::Yoshida4}) {
        o.scheme = scheme;
        const auto a = integrate(q, v, ms, o);
        const auto b = integrate(q, v, ms, o);
        CHECK(a.states.back().positions.coords()[0] == b.states.back().positions.coords()[0]);
        CHECK(a.states.back().velocities.coords()[5] == b.states.back().velocities.coords()[5]);
    }
}

TEST_CASE("Verlet is second order and Yoshida4 fourth order") {
    const MassSystem ms({1.0, 1.0});
    const Circular c = circular(1.0);
    auto error = [&](Integrator scheme, std::size_t steps) {
        IntegrateOptions o;
        o.scheme = scheme;
        o.steps = steps;
        o.dt = c.period / static_cast<double>(steps);
        o.record_every = steps;
        const auto t = integrate(c.q, c.v, ms, o);
        return std::hypot(t.states.back().positions.coords()[0] - c.q.coords()[0],
                          t.states.back().positions.coords()[1] - c.q.coords()[1]);
    };
    const double v1 = error(Integrator::Verlet, 512), v2 = error(Integrator::Verlet, 1024);
    CHECK(std::log2(v1 / v2) == doctest::Approx(2.0).epsilon(0.1));
    const double y1 = error(Integrator::Yoshida4, 128), y2 = error(Integrator::Yoshida4, 256);
    CHECK(std::log2(y1 / y2) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("integrate records every n-th state plus the final one") {
    const MassSystem ms({1.0, 1.0});
    const Circular c = circular(1.0);
    IntegrateOptions o;
    o.steps = 10;
    o.record_every = 3;
    const auto t = integrate(c.q, c.v, ms, o);
    CHECK(t.size() == 5);  // 0, 3, 6, 9, 10
    CHECK(t.times.back() == doctest::Approx(10 * o.dt));
}

TEST_CASE("head-on fall triggers the collision floor") {
    const MassSystem ms({1.0, 1.0});
    IntegrateOptions o;
    o.steps = 20000;
    o.dt = 1e-4;
    o.collision_floor = 1e-2;
    CHECK_THROWS_AS(integrate(Configuration(2, {0.5, 0, -0.5, 0}), Configuration::zeros(2, 2), ms, o),
                    CollisionApproach);
    CHECK_THROWS_AS(integrate(Configuration(2, {0, 0, 0, 0}), Configuration::zeros(2, 2), ms, o), CollisionError);
}

TEST_CASE("saari_monitor flags constant I on a circular orbit and not on an eccentric one") {
    const MassSystem ms({1.0, 1.0});
    const Circular c = circular(1.0);
    IntegrateOptions o;
    o.steps = 4096;
    o.dt = c.period / 4096;
    o.record_every = 16;
    auto r = saari_monitor(integrate(c.q, c.v, ms, o), ms);
    CHECK(r.defect_I < 1e-8);
    CHECK(r.defect_U < 1e-8);
    CHECK(r.saari_candidate);
    CHECK(r.jacobi_consistent);

    Configuration v = c.v.scaled(0.8);
    r = saari_monitor(integrate(c.q, v, ms, o), ms);
    CHECK_FALSE(r.saari_candidate);
    CHECK(r.defect_I > 0.1);
}

TEST_CASE("saari_monitor reports inconsistency when I is constant but U is not") {
    // Not a solution: both bodies keep |q| fixed but the separation changes.
    const MassSystem ms({1.0, 1.0});
    TrajectorySample t;
    for (int k = 0; k < 16; ++k) {
        const double a = 0.1 * k;
        t.times.push_back(k);
        t.states.push_back({Configuration(2, {1, 0, std::cos(a + 1), std::sin(a + 1)}), Configuration::zeros(2, 2)});
    }
    const auto r = saari_monitor(t, ms);
    CHECK(r.saari_candidate);
    CHECK_FALSE(r.jacobi_consistent);
    CHECK_THROWS_AS(saari_monitor(TrajectorySample{}, ms), EmptyInput);
}
