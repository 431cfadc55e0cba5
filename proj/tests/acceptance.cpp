// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "saari/action.hpp"
#include "saari/bessel.hpp"
#include "saari/central_config.hpp"
#include "saari/dynamics.hpp"
#include "saari/elliptic.hpp"
#include "saari/kepler.hpp"
#include "saari/kronecker.hpp"
#include "saari/planetary.hpp"

using namespace saari;
using oracle::kPi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
    bool ok = true;
    std::string detail;

    void check(bool cond, const std::string& what) {
        if (!cond) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += (cond ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// ---------------------------------------------------------------------------

Criterion central_configurations() {
    Criterion c;
    struct Case {
        std::size_t n;
        double expect, tol;
    };
    for (const Case k : {Case{2, 0.5, 1e-9}, Case{3, 9.0, 1e-6}, Case{4, 36.0 + 16.0 * std::sqrt(2.0), 1e-4}}) {
        const auto t0 = Clock::now();
        const auto r = minimize_IU2(MassSystem(std::vector<double>(k.n, 1.0)));
        const double s = seconds_since(t0);
        c.check(std::abs(r.value_IU2 - k.expect) <= k.tol,
                "N=" + std::to_string(k.n) + " IU2=" + fmt("%.12g", r.value_IU2));
        c.check(s < 5.0, fmt("%.3fs", s));
    }
    return c;
}

Criterion relative_equilibrium() {
    Criterion c;
    const auto t0 = Clock::now();
    const MassSystem ms({1.0, 1.0, 1.0});
    const auto cc = minimize_IU2(ms);
    const auto spec = build_relative_equilibrium(cc, ms);
    const double T = std::get<UniformTheta>(spec.theta_law).period;
    const Configuration q = spec.at_angle(0.0);
    Configuration v = spec.at_angle(kPi / 2);  // b_i
    const double w = 2 * kPi / T;
    for (double& x : v.coords()) x *= w;
    IntegrateOptions o;
    o.steps = 4096;
    o.dt = T / 4096;
    o.record_every = 4;
    const auto traj = integrate(q, v, ms, o);
    const auto mon = saari_monitor(traj, ms);
    const bool rigid = rigidity_verdict(spec, ms).rigid;
    const double s = seconds_since(t0);
    c.check(mon.defect_I < 1e-8, "defect_I=" + fmt("%.2e", mon.defect_I));
    c.check(mon.defect_U < 1e-8, "defect_U=" + fmt("%.2e", mon.defect_U));
    c.check(rigid, "rigid");
    c.check(s < 2.0, fmt("%.3fs", s));
    return c;
}

// Harmonic magnitude n (in psi = 2 theta) of m_j m_k / |q_j - q_k| by quadrature
// along the actual motion.
double pair_harmonic(const EllipticMotionSpec& s, const MassSystem& ms, std::size_t j, std::size_t k, int n,
                     int points) {
    long double re = 0.0L, im = 0.0L;
    for (int p = 0; p < points; ++p) {
        const double psi = 2 * kPi * p / points;
        const double th = psi / 2;
        double r2 = 0.0;
        for (int x = 0; x < s.dim; ++x) {
            const double d = (s.a[j * s.dim + x] - s.a[k * s.dim + x]) * std::cos(th) +
                             (s.b[j * s.dim + x] - s.b[k * s.dim + x]) * std::sin(th);
            r2 += d * d;
        }
        const double f = ms.mass(j) * ms.mass(k) / std::sqrt(r2);
        re += f * std::cos(n * psi);
        im -= f * std::sin(n * psi);
    }
    return static_cast<double>(std::sqrt(re * re + im * im) / points);
}

Criterion series_vs_quadrature() {
    Criterion c;
    oracle::Gen g(101);
    double worst = 0.0;
    int instances = 0;
    while (instances < 50) {
        EllipticMotionSpec s;
        s.a = g.uniforms(4, -1, 1);
        s.b = g.uniforms(4, -1, 1);
        const MassSystem ms({g.uniform(0.2, 3.0), g.uniform(0.2, 3.0)});
        const auto pc = pair_coefficients(s);
        if (pc.c(0, 1) < 0.4 || pc.c(0, 1) > 0.9) continue;
        ++instances;
        for (int n = 1; n <= 10; ++n) {
            const double d = d_coefficient(pc, ms, 0, 1, static_cast<std::size_t>(n)).value;
            const double q = pair_harmonic(s, ms, 0, 1, n, 4096);
            worst = std::max(worst, oracle::rel(d, q));
        }
    }
    c.check(worst < 1e-8, "50 instances, max rel err=" + fmt("%.2e", worst));
    const double ratio = series_ratio(1000, 1);
    c.check(std::abs(ratio - 1.0) < 1e-2, "c_1001/c_1000=" + fmt("%.6f", ratio));
    return c;
}

Criterion rigidity_dichotomy() {
    Criterion c;
    oracle::Gen g(102);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 5));
        EllipticMotionSpec s;
        s.a = g.uniforms(2 * n, -1, 1);
        if (trial % 2 == 0) {
            s.b = g.uniforms(2 * n, -1, 1);
        } else {
            s.b.resize(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                s.b[2 * i] = -s.a[2 * i + 1];
                s.b[2 * i + 1] = s.a[2 * i];
            }
        }
        const MassSystem ms(g.uniforms(n, 0.5, 2.0));
        const bool rigid = rigidity_verdict(s, ms).rigid;
        bool constant = true;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::vector<double> d;
                for (int t = 0; t < 512; ++t) {
                    const Configuration q = s.at_angle(kPi * t / 512);
                    d.push_back(std::hypot(q(j, 0) - q(k, 0), q(j, 1) - q(k, 1)));
                }
                if (constancy_defect(d) > 1e-8) constant = false;
            }
        if (rigid == constant) ++agree;
    }
    c.check(agree == 100, std::to_string(agree) + "/100 agree");
    return c;
}

Criterion kronecker() {
    Criterion c;
    const auto a = simultaneous_hits({std::sqrt(2.0) - 1.0}, 0.05, 1000);
    c.check(!a.hits.empty() && a.hits[0].k == 12, "first hit k=" + (a.hits.empty() ? std::string("none")
                                                                                      : std::to_string(a.hits[0].k)));
    const auto b = simultaneous_hits({std::sqrt(2.0), std::sqrt(3.0)}, 0.1, 1'000'000);
    bool verified = !b.hits.empty();
    if (verified) {
        for (double t : {std::sqrt(2.0), std::sqrt(3.0)}) {
            long double p = static_cast<long double>(b.hits[0].k) * t;
            p -= std::floor(p);
            verified = verified && (p < 0.1L || p > 0.9L);
        }
    }
    c.check(verified, "sqrt2,sqrt3 hit k=" + (b.hits.empty() ? std::string("none") : std::to_string(b.hits[0].k)));
    const auto t0 = Clock::now();
    const auto full = simultaneous_hits({std::sqrt(2.0), std::sqrt(3.0)}, 1e-6, 10'000'000);
    const double s = seconds_since(t0);
    c.check(full.hits.empty() && full.k_last == 10'000'000u, "scanned to k=" + std::to_string(full.k_last));
    c.check(s < 5.0, fmt("%.3fs", s));
    return c;
}

Criterion kepler_bessel() {
    Criterion c;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double e = 0.99 * i / 99.0;
        for (int k = 0; k < 100; ++k) {
            const double tau = -kPi + 2 * kPi * k / 100.0;
            const double E = solve_kepler(e, tau);
            worst = std::max(worst, std::abs(E - e * std::sin(E) - tau));
        }
    }
    c.check(worst < 1e-12, "kepler residual=" + fmt("%.2e", worst));
    const auto coeffs = inverse_radius_expansion(0.3, 30);
    double err = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const double tau = 2 * kPi * k / 2000;
        const double E = oracle::kepler_bisect(0.3, tau);
        err = std::max(err, std::abs(evaluate_cosine_series(coeffs, tau) - 1.0 / (1.0 - 0.3 * std::cos(E))));
    }
    c.check(err < 1e-10, "reconstruction err=" + fmt("%.2e", err));
    const double ratio = oracle::bessel_integral(50, 25.0, 8192) / debye_leading_term(50, 0.5);
    c.check(std::abs(ratio - 1.0) < 0.1, "asymptotic ratio=" + fmt("%.5f", ratio));
    return c;
}

PlanetarySystem planets(std::vector<double> periods, std::vector<double> ecc) {
    PlanetarySystem ps;
    ps.epsilon = 1e-3;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        ps.m_tilde.push_back(1.0);
        ps.orbits.push_back(KeplerOrbit::from_period(periods[i], ecc[i]));
    }
    return ps;
}

Criterion planetary_verdicts() {
    Criterion c;
    auto t0 = Clock::now();
    const auto circ = saari_planetary_verdict(planets({1.0, std::sqrt(2.0), 3.0}, {0.0, 0.0, 0.0}));
    c.check(circ.verdict == "circular", "circular system -> " + circ.verdict);
    c.check(seconds_since(t0) < 10.0, fmt("%.3fs", seconds_since(t0)));

    t0 = Clock::now();
    const auto one = saari_planetary_verdict(planets({1.0, 1.0}, {0.0, 0.2}));
    const auto& w = one.classes.at(0);
    const bool found = w.n && *w.n <= 200 && std::abs(w.coeff_cos) > 0.0 && w.flagged;
    c.check(found, "e=(0,0.2) witness n=" + (w.n ? std::to_string(*w.n) : std::string("none")) +
                       " coeff=" + fmt("%.6g", w.coeff_cos));
    c.check(seconds_since(t0) < 10.0, fmt("%.3fs", seconds_since(t0)));

    t0 = Clock::now();
    const auto two = saari_planetary_verdict(planets({1.0, std::sqrt(2.0)}, {0.1, 0.1}));
    bool both = two.classes.size() == 2;
    for (const auto& k : two.classes) both = both && k.flagged;
    c.check(both, "periods (1, sqrt2) both classes flagged");
    c.check(seconds_since(t0) < 10.0, fmt("%.3fs", seconds_since(t0)));
    return c;
}

Criterion difference_reduction() {
    Criterion c;
    const auto part = period_partition({1.0, std::sqrt(2.0)});
    UniformSeries osc, flat;
    osc.dt = flat.dt = 1.0 / 256;
    for (int s = 0; s <= 40 * 256; ++s) {
        const double t = s / 256.0;
        osc.values.push_back(std::cos(2 * kPi * t) + std::cos(2 * kPi * t / std::sqrt(2.0)));
        flat.values.push_back(1.75);
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const double d = difference_reduce(osc, part, j).defect;
        c.check(d > 0.5, "class " + std::to_string(j) + " defect=" + fmt("%.4f", d));
        const double z = difference_reduce(flat, part, j).defect;
        c.check(z < 1e-8, "constant defect=" + fmt("%.2e", z));
    }
    return c;
}

Criterion action_bound() {
    Criterion c;
    const auto t0 = Clock::now();
    MinimizeActionOptions o;
    o.restarts = 4;
    const auto two = minimize_action(MassSystem({1.0, 1.0}), 2 * kPi, 4, 0.5, o);
    const double lb_oracle = 3.0 * std::cbrt(0.5 * kPi * kPi / 2.0) * std::cbrt(2 * kPi);
    c.check(two.report.lower_bound == lb_oracle || oracle::rel(two.report.lower_bound, lb_oracle) < 1e-12,
            "N=2 bound=" + fmt("%.6f", two.report.lower_bound));
    c.check(std::abs(two.report.lower_bound - 7.4810) < 1e-3, "bound vs 7.4810 within 1e-3");
    c.check(two.report.relative_gap < 1e-4, "N=2 gap/bound=" + fmt("%.2e", two.report.relative_gap));

    const MassSystem three({1.0, 1.0, 1.0});
    const auto r = minimize_action(three, 1.0, 3, 9.0, o);
    double ratio = 0.0;
    for (double t : {0.0, 0.25, 0.5}) {
        const auto q = r.loop.position(t);
        std::vector<double> d;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j) d.push_back(std::hypot(q(i, 0) - q(j, 0), q(i, 1) - q(j, 1)));
        std::sort(d.begin(), d.end());
        ratio = std::max(ratio, d.back() / d.front() - 1.0);
    }
    c.check(ratio < 1e-3, "N=3 distance ratio spread=" + fmt("%.2e", ratio));
    c.check(r.report.first_harmonic_only.set && r.report.balanced.set && r.report.minimizes_IU2.set,
            "flags (i)(ii)(iii)");

    oracle::Gen g(109);
    int evaluated = 0, violations = 0;
    while (evaluated < 200) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 3));
        const double T = g.uniform(0.5, 10.0);
        FourierLoop loop(n, 4, T);
        for (double& x : loop.coeffs()) x = g.uniform(-1.0, 1.0);
        const MassSystem ms(std::vector<double>(n, 1.0));
        try {
            const double a = action(loop, ms, 1024);
            ++evaluated;
            if (a < lower_bound(T, n == 2 ? 0.5 : 9.0) * (1.0 - 1e-9)) ++violations;
        } catch (const CollisionOnGrid&) {
        }
    }
    c.check(violations == 0, "random loops: " + std::to_string(violations) + " violations in 200");
    const double s = seconds_since(t0);
    c.check(s < 60.0, fmt("%.2fs", s));
    return c;
}

Criterion hygiene() {
    Criterion c;
    oracle::Gen g(110);
    // Action gradient.
    FourierLoop loop(3, 3, 2.0);
    for (double& x : loop.coeffs()) x = g.uniform(-1.0, 1.0);
    const MassSystem ms3({1.0, 1.5, 0.8});
    const auto grad = action_gradient(loop, ms3, 256);
    double en = 0.0, gn = 0.0;
    for (std::size_t k = 0; k < loop.coeffs().size(); ++k) {
        const double x = loop.coeffs()[k], h = 1e-6;
        loop.coeffs()[k] = x + h;
        const double up = action(loop, ms3, 256);
        loop.coeffs()[k] = x - h;
        const double dn = action(loop, ms3, 256);
        loop.coeffs()[k] = x;
        const double fd = (up - dn) / (2 * h);
        en += (fd - grad[k]) * (fd - grad[k]);
        gn += fd * fd;
    }
    c.check(std::sqrt(en / gn) < 1e-5, "action gradient rel err=" + fmt("%.2e", std::sqrt(en / gn)));

    // newton_rhs.
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = g.uniforms(4, 0.5, 2.0);
        const auto q = g.uniforms(8, -1.0, 1.0);
        if (min_pairwise_distance(Configuration(2, q)) < 0.1) continue;
        const auto a = newton_rhs(Configuration(2, q), MassSystem(m));
        double e2 = 0.0, n2 = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            const double fd = oracle::dU_fd(q, m, 2, k, 1e-5);
            e2 += std::pow(m[k / 2] * a.coords()[k] - fd, 2);
            n2 += fd * fd;
        }
        worst = std::max(worst, std::sqrt(e2 / n2));
    }
    c.check(worst < 1e-6, "newton_rhs rel err=" + fmt("%.2e", worst));

    // Energy drift, circular two-body orbit of unit separation.
    const MassSystem ms2({1.0, 1.0});
    const double w = std::sqrt(2.0);
    const Configuration q(2, {0.5, 0, -0.5, 0}), v(2, {0, 0.5 * w, 0, -0.5 * w});
    IntegrateOptions o;
    o.steps = 10 * 4096;
    o.dt = 2 * kPi / w / 4096;
    o.record_every = 32;
    const auto traj = integrate(q, v, ms2, o);
    const double e0 = energies(q, v, ms2).total;
    double drift = 0.0;
    for (const auto& st : traj.states)
        drift = std::max(drift, std::abs(energies(st.positions, st.velocities, ms2).total - e0) / std::abs(e0));
    c.check(drift < 1e-8, "energy drift=" + fmt("%.2e", drift));
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Criterion()>>> criteria{
        {"central configurations", central_configurations},
        {"relative equilibrium rigidity", relative_equilibrium},
        {"harmonic series vs quadrature", series_vs_quadrature},
        {"rigidity dichotomy", rigidity_dichotomy},
        {"simultaneous Kronecker hits", kronecker},
        {"Kepler equation and Bessel coefficients", kepler_bessel},
        {"planetary verdicts", planetary_verdicts},
        {"difference reduction", difference_reduction},
        {"action lower bound", action_bound},
        {"numerical hygiene", hygiene},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        if (!c.ok) ++failures;
        std::printf("%s %zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
