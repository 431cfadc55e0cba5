#include "saari/central_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "saari/dynamics.hpp"
#include "saari/kepler.hpp"
#include "saari/numeric.hpp"

namespace saari {

CentralResidual central_residual(const Configuration& cfg, const MassSystem& ms) {
    const double U = force_function(cfg, ms);
    const double I = moment_of_inertia(cfg, ms);
    if (!(I > 0.0)) throw InvalidArgument("moment of inertia vanishes");
    const Configuration acc = newton_rhs(cfg, ms);

    CentralResidual r;
    r.lambda = U / I;
    r.residuals = Configuration::zeros(cfg.size(), cfg.dim());
    double num = 0.0;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const double m = ms.mass(k);
        for (int a = 0; a < cfg.dim(); ++a) {
            const double per_mass = acc(k, a) + r.lambda * cfg(k, a);
            r.residuals(k, a) = m * per_mass;
            num += m * per_mass * per_mass;
        }
    }
    // sum_k m_k |lambda q_k|^2 = lambda^2 I
    r.norm = std::sqrt(num) / (r.lambda * std::sqrt(I));
    return r;
}

double iu2(const Configuration& cfg, const MassSystem& ms) {
    const double U = force_function(cfg, ms);
    return moment_of_inertia(cfg, ms) * U * U;
}

namespace {

std::vector<double> sorted_distances(const Configuration& cfg) {
    std::vector<double> d;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.size(); ++j) {
            double r2 = 0.0;
            for (int a = 0; a < cfg.dim(); ++a) r2 += (cfg(i, a) - cfg(j, a)) * (cfg(i, a) - cfg(j, a));
            d.push_back(std::sqrt(r2));
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Descent runs in mass-weighted coordinates z_k = sqrt(m_k) q_k, where the
// metric is Euclidean and I = |z|^2.
class Iu2Descent {
public:
    Iu2Descent(const MassSystem& ms, const MinimizeIU2Options& opts) : ms_(ms), opts_(opts) {
        for (double m : ms.masses()) sqrt_m_.push_back(std::sqrt(m));
    }

    struct Outcome {
        bool converged = false;
        Configuration cfg;
        double value = std::numeric_limits<double>::infinity();
    };

    Outcome run(Configuration start) const {
        Outcome out;
        Configuration q = normalize(start);
        const double scale = 1.0 / std::sqrt(ms_.total_mass());
        if (min_pairwise_distance(q) < 1e-6 * scale) return out;

        Eval cur = evaluate(q);
        std::vector<double> history{cur.f};
        double alpha = 1e-2;
        const double eps = std::numeric_limits<double>::epsilon();

        for (std::size_t it = 0; it < opts_.max_iterations; ++it) {
            if (cur.residual < opts_.tol_residual) {
                out.converged = true;
                break;
            }
            const double f_ref = *std::max_element(history.begin(), history.end());
            const double g2 = dot(cur.g, cur.g);
            bool accepted = false;
            Configuration trial;
            Eval next;
            for (int bt = 0; bt < 60; ++bt) {
                trial = step(q, cur.g, alpha);
                if (min_pairwise_distance(trial) < 1e-6 * scale) {
                    alpha *= 0.5;
                    continue;
                }
                next = evaluate(trial);
                if (next.f <= f_ref - 1e-4 * alpha * g2 + 8.0 * eps * std::abs(cur.f)) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;

            // Barzilai-Borwein step from the mass-weighted displacement.
            double ss = 0.0, sy = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) {
                for (int a = 0; a < q.dim(); ++a) {
                    const double s = sqrt_m_[k] * (trial(k, a) - q(k, a));
                    const double y = next.g[k * q.dim() + a] - cur.g[k * q.dim() + a];
                    ss += s * s;
                    sy += s * y;
                }
            }
            alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e6) : 1e-2;

            q = std::move(trial);
            cur = std::move(next);
            history.push_back(cur.f);
            if (history.size() > 10) history.erase(history.begin());
        }
        if (cur.residual < opts_.tol_residual) out.converged = true;
        out.cfg = q;
        out.value = cur.f;
        return out;
    }

private:
    struct Eval {
        double f = 0.0;
        std::vector<double> g;  // gradient with respect to z
        double residual = 0.0;
    };

    static double dot(const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    }

    Configuration normalize(const Configuration& q) const {
        Configuration c = q.centered(ms_);
        const double I = moment_of_inertia(c, ms_);
        c = c.scaled(1.0 / std::sqrt(I));
        c.set_com_zero(true);
        return c;
    }

    Configuration step(const Configuration& q, const std::vector<double>& g, double alpha) const {
        Configuration t = q;
        for (std::size_t k = 0; k < q.size(); ++k)
            for (int a = 0; a < q.dim(); ++a) t(k, a) -= alpha * g[k * q.dim() + a] / sqrt_m_[k];
        return normalize(t);
    }

    Eval evaluate(const Configuration& q) const {
        Eval e;
        const double U = force_function(q, ms_);
        const double I = moment_of_inertia(q, ms_);
        const Configuration acc = newton_rhs(q, ms_);
        e.f = I * U * U;
        e.g.resize(q.coords().size());
        const double lambda = U / I;
        double num = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            for (int a = 0; a < q.dim(); ++a) {
                const double per_mass = acc(k, a) + lambda * q(k, a);
                e.g[k * q.dim() + a] = 2.0 * sqrt_m_[k] * U * I * per_mass;
                num += ms_.mass(k) * per_mass * per_mass;
            }
        }
        e.residual = std::sqrt(num) / (lambda * std::sqrt(I));
        return e;
    }

    const MassSystem& ms_;
    const MinimizeIU2Options& opts_;
    std::vector<double> sqrt_m_;
};

Configuration random_start(const MassSystem& ms, std::uint64_t seed, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Configuration c = Configuration::zeros(ms.size(), ms.dim());
    for (double& x : c.coords()) x = u(rng);
    return c;
}

bool better(const Iu2Descent::Outcome& a, const Iu2Descent::Outcome& b) {
    if (a.value != b.value) return a.value < b.value;
    return sorted_distances(a.cfg) < sorted_distances(b.cfg);
}

}  // namespace

CentralConfigResult minimize_IU2(const MassSystem& ms, const MinimizeIU2Options& opts,
                                 const std::optional<Configuration>& init) {
    if (ms.size() < 2) throw InvalidArgument("need at least two bodies");
    const Iu2Descent descent(ms, opts);

    const std::size_t runs = init ? 1 : std::max<std::size_t>(1, opts.restarts);
    std::vector<Iu2Descent::Outcome> outcomes(runs);
    auto work = [&](std::size_t r) {
        const Configuration start = init ? *init : random_start(ms, opts.seed, r);
        if (start.size() != ms.size() || start.dim() != ms.dim())
            throw DimensionMismatch("initial configuration does not match the mass system");
        outcomes[r] = descent.run(start);
    };

    parallel_for(runs, opts.threads, work);

    const Iu2Descent::Outcome* best = nullptr;
    std::size_t converged = 0;
    for (const auto& o : outcomes) {
        if (!o.converged) continue;
        ++converged;
        if (!best || better(o, *best)) best = &o;
    }
    if (!best) throw NonConvergence("no descent reached the residual tolerance");

    CentralConfigResult res;
    res.cfg = best->cfg;
    res.cfg.set_com_zero(true);
    const CentralResidual cr = central_residual(res.cfg, ms);
    res.value_IU2 = iu2(res.cfg, ms);
    res.lambda = cr.lambda;
    res.residual_norm = cr.norm;
    res.restarts_used = runs;
    res.restarts_converged = converged;
    return res;
}

EllipticMotionSpec build_relative_equilibrium(const CentralConfigResult& ccr, const MassSystem& ms,
                                              double tol_residual) {
    if (ccr.cfg.dim() != 2 || ms.dim() != 2) throw InvalidArgument("relative equilibria are built in the plane");
    const CentralResidual cr = central_residual(ccr.cfg, ms);
    if (!(cr.norm < tol_residual)) throw NotCentral("configuration is not central within tolerance");

    EllipticMotionSpec spec;
    spec.dim = 2;
    const std::size_t n = ccr.cfg.size();
    spec.a.resize(2 * n);
    spec.b.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ccr.cfg(i, 0);
        const double y = ccr.cfg(i, 1);
        spec.a[2 * i] = x;
        spec.a[2 * i + 1] = y;
        spec.b[2 * i] = -y;
        spec.b[2 * i + 1] = x;
    }
    spec.theta_law = UniformTheta{2.0 * std::numbers::pi / std::sqrt(cr.lambda)};
    return spec;
}

TrajectorySample build_homographic(const CentralConfigResult& ccr, const MassSystem& ms, double e,
                                   std::size_t samples, double periods, double tol_residual) {
    if (!(e >= 0.0 && e < 1.0)) throw InvalidArgument("eccentricity must lie in [0, 1)");
    if (ccr.cfg.dim() != 2 || ms.dim() != 2) throw InvalidArgument("homographic motions are built in the plane");
    if (samples == 0 || !(periods > 0.0)) throw InvalidArgument("need positive samples and periods");
    const CentralResidual cr = central_residual(ccr.cfg, ms);
    if (!(cr.norm < tol_residual)) throw NotCentral("configuration is not central within tolerance");

    // z'' = -lambda z / |z|^3 in the complex plane.
    const KeplerOrbit orbit{1.0, e, 0.0, cr.lambda};
    const double span = periods * orbit.period();
    const std::size_t n = ccr.cfg.size();

    TrajectorySample traj;
    for (std::size_t k = 0; k <= samples; ++k) {
        const double t = span * static_cast<double>(k) / static_cast<double>(samples);
        const auto z = kepler_position(orbit, t);
        const auto zd = kepler_velocity(orbit, t);
        Configuration q = Configuration::zeros(n, 2);
        Configuration v = Configuration::zeros(n, 2);
        for (std::size_t i = 0; i < n; ++i) {
            const double cx = ccr.cfg(i, 0);
            const double cy = ccr.cfg(i, 1);
            q(i, 0) = z[0] * cx - z[1] * cy;
            q(i, 1) = z[0] * cy + z[1] * cx;
            v(i, 0) = zd[0] * cx - zd[1] * cy;
            v(i, 1) = zd[0] * cy + zd[1] * cx;
        }
        traj.times.push_back(t);
        traj.states.push_back({std::move(q), std::move(v)});
    }
    return traj;
}

}  // namespace saari
