#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "saari/action.hpp"
#include "saari/central_config.hpp"
#include "saari/dynamics.hpp"

using namespace saari;

namespace {

FourierLoop random_loop(oracle::Gen& g, std::size_t n, std::size_t M, double T) {
    FourierLoop loop(n, M, T);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t h = 1; h <= M; ++h)
            for (int s = 0; s < 2; ++s)
                for (int a = 0; a < 2; ++a) loop.coeff(b, h, s == 1, a) = g.uniform(-1.0, 1.0) / (h * h);
    return loop;
}

// Independent midpoint-free trapezoid evaluation of the action from positions.
double action_oracle(const FourierLoop& loop, const std::vector<double>& m, std::size_t S) {
    long double total = 0.0L;
    for (std::size_t s = 0; s < S; ++s) {
        const double t = loop.period() * static_cast<double>(s) / static_cast<double>(S);
        const auto q = loop.position(t);
        const auto v = loop.velocity(t);
        const std::vector<double> qc(q.coords().begin(), q.coords().end());
        const std::vector<double> vc(v.coords().begin(), v.coords().end());
        total += 0.5 * oracle::inertia(vc, m, 2) + oracle::force_function(qc, m, 2);
    }
    return static_cast<double>(total * loop.period() / S);
}

}  // namespace

TEST_CASE("lower bound values") {
    CHECK(lower_bound(2 * oracle::kPi, 0.5) == doctest::Approx(7.480451224746).epsilon(1e-10));
    CHECK(lower_bound(1.0, 9.0) == doctest::Approx(10.624097).epsilon(1e-6));
    CHECK(lower_bound(8.0, 9.0) == doctest::Approx(2.0 * lower_bound(1.0, 9.0)));
}

TEST_CASE("Fourier loop evaluation and exact kinetic integral") {
    oracle::Gen g(61);
    for (int trial = 0; trial < 20; ++trial) {
        const auto loop = random_loop(g, 3, 4, g.uniform(0.5, 5.0));
        const std::vector<double> m{1.0, 2.0, 0.5};
        const MassSystem ms(m);
        const std::size_t S = 512;
        long double K = 0.0L;
        for (std::size_t s = 0; s < S; ++s) {
            const auto v = loop.velocity(loop.period() * s / S);
            K += 0.5 * oracle::inertia({v.coords().begin(), v.coords().end()}, m, 2);
        }
        CHECK(kinetic_integral(loop, ms) == doctest::Approx(static_cast<double>(K * loop.period() / S)).epsilon(1e-12));
        const auto p0 = loop.position(0.0);
        const auto pT = loop.position(loop.period());
        for (std::size_t k = 0; k < 6; ++k) CHECK(p0.coords()[k] == doctest::Approx(pT.coords()[k]).scale(1.0));
    }
}

TEST_CASE("action agrees with a direct evaluation") {
    oracle::Gen g(62);
    for (int trial = 0; trial < 10; ++trial) {
        const auto loop = random_loop(g, 3, 3, 2.0);
        const std::vector<double> m{1.0, 1.0, 1.0};
        const MassSystem ms(m);
        try {
            const double a = action(loop, ms, 4096);
            CHECK(a == doctest::Approx(action_oracle(loop, m, 4096)).epsilon(1e-10));
        } catch (const CollisionOnGrid&) {
        }
    }
}

TEST_CASE("action gradient matches finite differences") {
    oracle::Gen g(63);
    int checked = 0;
    for (int trial = 0; trial < 10; ++trial) {
        FourierLoop loop = random_loop(g, 3, 3, 2.0);
        const MassSystem ms({1.0, 1.5, 0.8});
        const std::size_t S = 256;
        std::vector<double> grad;
        try {
            grad = action_gradient(loop, ms, S);
        } catch (const CollisionOnGrid&) {
            continue;
        }
        double gnorm = 0.0, enorm = 0.0;
        for (std::size_t k = 0; k < loop.coeffs().size(); ++k) {
            const double x = loop.coeffs()[k], h = 1e-6;
            loop.coeffs()[k] = x + h;
            const double up = action(loop, ms, S);
            loop.coeffs()[k] = x - h;
            const double dn = action(loop, ms, S);
            loop.coeffs()[k] = x;
            const double fd = (up - dn) / (2 * h);
            enorm += (fd - grad[k]) * (fd - grad[k]);
            gnorm += fd * fd;
        }
        CHECK(std::sqrt(enorm / gnorm) < 1e-5);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("Wirtinger defect vanishes on first-harmonic loops only") {
    oracle::Gen g(64);
    const MassSystem ms({1.0, 2.0});
    auto loop = random_loop(g, 2, 3, 1.0);
    CHECK(wirtinger_defect(loop, ms) > 0.0);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t h = 2; h <= 3; ++h)
            for (int s = 0; s < 2; ++s)
                for (int a = 0; a < 2; ++a) loop.coeff(b, h, s == 1, a) = 0.0;
    CHECK(wirtinger_defect(loop, ms) == 0.0);
}

TEST_CASE("action is bounded below on random loops") {
    oracle::Gen g(65);
    int evaluated = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 3));
        const double T = g.uniform(0.5, 10.0);
        const auto loop = random_loop(g, n, 4, T);
        const MassSystem ms(std::vector<double>(n, 1.0));
        const double inf = n == 2 ? 0.5 : 9.0;
        try {
            const double a = action(loop, ms, 1024);
            CHECK(a >= lower_bound(T, inf) * (1.0 - 1e-9));
            ++evaluated;
        } catch (const CollisionOnGrid&) {
        }
    }
    CHECK(evaluated > 150);
}

TEST_CASE("relative equilibrium loop attains the bound with all equality flags") {
    const MassSystem ms({1.0, 1.0, 1.0});
    const auto cc = minimize_IU2(ms);
    const double T = 1.0;
    const auto loop = relative_equilibrium_loop(cc.cfg, ms, T, 3);
    const auto r = equality_conditions(loop, ms, cc.value_IU2);
    CHECK(r.relative_gap < 1e-10);
    CHECK(r.lower_bound == doctest::Approx(10.624097).epsilon(1e-6));
    CHECK(r.first_harmonic_only.set);
    CHECK(r.balanced.set);
    CHECK(r.minimizes_IU2.set);
    CHECK(r.center_of_mass_drift < 1e-12);
    // The loop solves Newton's equations: distances stay fixed along it.
    const auto spec = to_elliptic_spec(loop);
    CHECK(rigidity_verdict(spec, ms).rigid);
}

TEST_CASE("Euler collinear rotation is balanced but does not minimize IU^2") {
    const MassSystem ms({1.0, 1.0, 1.0});
    const auto cc = minimize_IU2(ms, {}, Configuration(2, {-1.1, 0, 0.05, 0, 0.9, 0}));
    const auto loop = relative_equilibrium_loop(cc.cfg, ms, 1.0, 2);
    const auto r = equality_conditions(loop, ms, 9.0);
    CHECK(r.first_harmonic_only.set);
    CHECK(r.balanced.set);
    CHECK_FALSE(r.minimizes_IU2.set);
    CHECK(r.gap > 0.0);
}

TEST_CASE("minimize_action for two bodies reaches the bound") {
    MinimizeActionOptions o;
    o.restarts = 4;
    const auto r = minimize_action(MassSystem({1.0, 1.0}), 2 * oracle::kPi, 4, 0.5, o);
    CHECK(r.success);
    CHECK(r.report.relative_gap < 1e-4);
    CHECK(r.report.lower_bound == doctest::Approx(7.480451).epsilon(1e-6));
    CHECK(r.report.first_harmonic_only.set);
}

TEST_CASE("minimize_action for three equal masses finds an equilateral rotation") {
    MinimizeActionOptions o;
    o.restarts = 4;
    const MassSystem ms({1.0, 1.0, 1.0});
    const auto r = minimize_action(ms, 1.0, 3, 9.0, o);
    CHECK(r.success);
    CHECK(r.report.first_harmonic_only.set);
    CHECK(r.report.balanced.set);
    CHECK(r.report.minimizes_IU2.set);
    const auto q = r.loop.position(0.123);
    std::vector<double> d;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) d.push_back(std::hypot(q(i, 0) - q(j, 0), q(i, 1) - q(j, 1)));
    std::sort(d.begin(), d.end());
    CHECK(d.back() / d.front() - 1.0 < 1e-3);
}

TEST_CASE("minimize_action is deterministic for a fixed seed") {
    MinimizeActionOptions o;
    o.restarts = 2;
    const MassSystem ms({1.0, 1.0});
    const auto a = minimize_action(ms, 1.0, 2, 0.5, o);
    const auto b = minimize_action(ms, 1.0, 2, 0.5, o);
    CHECK(a.report.action_value == b.report.action_value);
    CHECK(a.loop.coeffs() == b.loop.coeffs());
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(FourierLoop(1, 2, 1.0), InvalidArgument);
    CHECK_THROWS_AS(FourierLoop(2, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(FourierLoop(2, 2, -1.0), InvalidArgument);
    CHECK_THROWS_AS(lower_bound(1.0, 0.0), InvalidArgument);
    FourierLoop zero(2, 1, 1.0);
    CHECK_THROWS_AS(action(zero, MassSystem({1.0, 1.0})), CollisionOnGrid);
}
