#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "saari/dynamics.hpp"
#include "saari/elliptic.hpp"

using namespace saari;

namespace {

EllipticMotionSpec random_spec(oracle::Gen& g, std::size_t n, int dim = 2) {
    EllipticMotionSpec s;
    s.dim = dim;
    s.a = g.uniforms(n * dim, -1.0, 1.0);
    s.b = g.uniforms(n * dim, -1.0, 1.0);
    s.theta_law = UniformTheta{1.0};
    return s;
}

double pair_dist2(const EllipticMotionSpec& s, std::size_t j, std::size_t k, double theta) {
    double r2 = 0.0;
    for (int x = 0; x < s.dim; ++x) {
        const double d = (s.a[j * s.dim + x] - s.a[k * s.dim + x]) * std::cos(theta) +
                         (s.b[j * s.dim + x] - s.b[k * s.dim + x]) * std::sin(theta);
        r2 += d * d;
    }
    return r2;
}

}  // namespace

TEST_CASE("pair coefficients reproduce |q_j - q_k|^2 with the sign convention of the phase") {
    oracle::Gen g(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_spec(g, static_cast<std::size_t>(g.integer(2, 5)), g.integer(1, 3));
        const auto pc = pair_coefficients(s);
        for (std::size_t j = 0; j < pc.n; ++j)
            for (std::size_t k = j + 1; k < pc.n; ++k) {
                CHECK(pc.c(j, k) >= 0.0);
                CHECK(pc.c(j, k) <= 1.0 + 1e-12);
                CHECK(pc.a(j, k) == doctest::Approx(pc.a(k, j)));
                for (double th : {0.0, 0.3, 1.1, 2.9, 4.0}) {
                    const double model = pc.a(j, k) + pc.b(j, k) * std::cos(2 * th + pc.theta(j, k));
                    CHECK(model == doctest::Approx(pair_dist2(s, j, k, th)).epsilon(1e-12).scale(1.0));
                }
            }
    }
}

TEST_CASE("phase sign: |a cos t + b sin t|^2 has its maximum where cos(2t + phase) = 1") {
    // a = (1, 0), b = (0.5, 0.5): a.b = 0.5 > 0, so the maximum lies at t > 0
    // and the phase is negative.
    EllipticMotionSpec s;
    s.a = {1, 0, 0, 0};
    s.b = {0.5, 0.5, 0, 0};
    const auto pc = pair_coefficients(s);
    CHECK(pc.theta(0, 1) < 0.0);
    const double t_max = -pc.theta(0, 1) / 2;
    CHECK(pair_dist2(s, 0, 1, t_max) > pair_dist2(s, 0, 1, t_max + 0.01));
    CHECK(pair_dist2(s, 0, 1, t_max) > pair_dist2(s, 0, 1, t_max - 0.01));
}

TEST_CASE("coincident coefficient vectors are a permanent collision") {
    EllipticMotionSpec s;
    s.a = {1, 0, 1, 0};
    s.b = {0, 1, 0, 1};
    CHECK_THROWS_AS(pair_coefficients(s), PermanentCollision);
}

TEST_CASE("elliptic motion validation") {
    EllipticMotionSpec s;
    s.a = {1, 0};
    s.b = {0, 1};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.a = {1, 0, 0, 0};
    s.b = {0, 1, 0};
    CHECK_THROWS(s.validate());
    s.b = {0, 1, 0, 0};
    s.theta_law = SampledTheta{{0, 1, 2}, {0, 0.5, 1.0}};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);  // range shorter than pi
    s.theta_law = SampledTheta{{0, 1, 2}, {0, 2.0, 4.0}};
    CHECK_NOTHROW(s.validate());
    CHECK(s.at_time(0.5)(0, 0) == doctest::Approx(std::cos(1.0)));
}

TEST_CASE("series ratio matches the coefficient recursion and tends to 1") {
    for (std::size_t n = 0; n < 5; ++n) {
        const double l = 3.0;
        const double expect = (2 * l + n + 0.5) * (2 * l + n + 1.5) / (4 * (l + 1) * (l + n + 1));
        CHECK(series_ratio(3, n) == doctest::Approx(expect));
    }
    CHECK(std::abs(series_ratio(1000, 1) - 1.0) < 1e-2);
    CHECK(std::abs(series_ratio(1000, 10) - 1.0) < 1e-2);
}

TEST_CASE("d_series matches quadrature of (1 + C cos psi)^(-1/2)") {
    oracle::Gen g(22);
    for (int trial = 0; trial < 40; ++trial) {
        const double C = g.uniform(0.0, 0.9);
        for (std::size_t n = 1; n <= 10; ++n) {
            const double q = oracle::harmonic_quadrature(C, static_cast<int>(n));
            const auto r = d_series(C, n);
            CHECK(oracle::rel(r.value, q) < 1e-8 + 1e-14 / std::max(q, 1e-300));
            CHECK_FALSE(r.slow_mode);
        }
    }
}

TEST_CASE("d_series is zero at C = 0 and needs n >= 1") {
    CHECK(d_series(0.0, 1).value == 0.0);
    CHECK(d_series(0.0, 3).value == 0.0);
    CHECK_THROWS_AS(d_series(0.5, 0), InvalidArgument);
    CHECK_THROWS_AS(d_series(1.5, 1), InvalidArgument);
}

TEST_CASE("d_series at C = 1 runs in slow mode and is positive") {
    const auto r = d_series(1.0, 2, 1e-6);
    CHECK(r.slow_mode);
    CHECK(r.value > 0.0);
}

TEST_CASE("d_series reports non-convergence under a tiny budget") {
    CHECK_THROWS_AS(d_series(0.9, 1, 1e-14, 5), SeriesNotConverged);
}

TEST_CASE("sum of pair coefficients reproduces the harmonics of U when one pair dominates") {
    // Two bodies: U has exactly the pair's harmonic content.
    oracle::Gen g(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_spec(g, 2);
        const MassSystem ms({g.uniform(0.5, 2.0), g.uniform(0.5, 2.0)});
        const auto pc = pair_coefficients(s);
        if (pc.c(0, 1) > 0.9) continue;
        const auto h = fourier_of_U(s, ms, 6);
        for (std::size_t n = 1; n <= 6; ++n) {
            const double d = d_coefficient(pc, ms, 0, 1, n).value;
            CHECK(d == doctest::Approx(h[n]).epsilon(1e-8).scale(1e-12));
        }
    }
}

TEST_CASE("rigidity verdict agrees with sampled constancy of distances") {
    oracle::Gen g(24);
    int agree = 0, total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 5));
        EllipticMotionSpec s;
        if (trial % 2 == 0) {
            s = random_spec(g, n);
        } else {
            // Rigid: b_i is a quarter-turn of a_i.
            s.a = g.uniforms(2 * n, -1, 1);
            s.b.resize(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                s.b[2 * i] = -s.a[2 * i + 1];
                s.b[2 * i + 1] = s.a[2 * i];
            }
        }
        const MassSystem ms(std::vector<double>(n, 1.0));
        const auto v = rigidity_verdict(s, ms);
        bool constant = true;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::vector<double> d;
                for (int t = 0; t < 256; ++t) d.push_back(std::sqrt(pair_dist2(s, j, k, oracle::kPi * t / 256)));
                if (constancy_defect(d) > 1e-8) constant = false;
            }
        ++total;
        if (v.rigid == constant) ++agree;
        CHECK(v.rigid == (trial % 2 == 1));
        CHECK(v.witness.has_value() == !v.rigid);
    }
    CHECK(agree == total);
}

TEST_CASE("rigid rotation has no harmonics beyond the mean") {
    EllipticMotionSpec s;
    s.a = {1, 0, -0.5, 0.8, -0.5, -0.8};
    s.b = {0, 1, -0.8, -0.5, 0.8, -0.5};
    const auto h = fourier_of_U(s, MassSystem({1.0, 2.0, 3.0}), 8, 256);
    CHECK(h[0] > 1.0);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(h[n] < 1e-12);
}

TEST_CASE("fourier_of_U rejects collisions on the grid and sampled theta laws") {
    EllipticMotionSpec s;
    s.a = {1, 0, 1, 0};
    s.b = {0, 1, 0, -1};
    CHECK_THROWS_AS(fourier_of_U(s, MassSystem({1.0, 1.0}), 4, 64), CollisionOnGrid);
    s.b = {0, 1, 0, -1};
    s.theta_law = SampledTheta{{0, 1}, {0, 4}};
    CHECK_THROWS_AS(fourier_of_U(s, MassSystem({1.0, 1.0}), 4, 64), InvalidArgument);
}
