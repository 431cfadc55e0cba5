#include "saari/action.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

#include "saari/dynamics.hpp"
#include "saari/kernels.hpp"
#include "saari/numeric.hpp"

namespace saari {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// cos(n w t_s) and sin(n w t_s) for n = 0..M on S equispaced samples.
struct Twiddles {
    std::size_t S = 0;
    std::vector<double> c, s;
    Twiddles(std::size_t samples) : S(samples), c(samples), s(samples) {
        for (std::size_t k = 0; k < S; ++k) {
            const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(S);
            c[k] = std::cos(ang);
            s[k] = std::sin(ang);
        }
    }
    double cos_at(std::size_t n, std::size_t k) const { return c[(n * k) % S]; }
    double sin_at(std::size_t n, std::size_t k) const { return s[(n * k) % S]; }
};

struct GridEval {
    std::vector<double> U;
    std::vector<double> accel;  // (body * 2 + axis) * S + s
    std::vector<double> positions;
    double min_dist = 0.0;
};

GridEval evaluate_grid(const FourierLoop& loop, const MassSystem& ms, const Twiddles& tw, bool with_accel) {
    const std::size_t N = loop.bodies();
    const std::size_t M = loop.harmonics();
    const std::size_t S = tw.S;
    GridEval g;
    g.positions.assign(N * 2 * S, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        for (int ax = 0; ax < 2; ++ax) {
            double* row = &g.positions[(i * 2 + ax) * S];
            for (std::size_t n = 1; n <= M; ++n) {
                const double a = loop.coeff(i, n, false, ax);
                const double b = loop.coeff(i, n, true, ax);
                if (a == 0.0 && b == 0.0) continue;
                for (std::size_t k = 0; k < S; ++k) row[k] += a * tw.cos_at(n, k) + b * tw.sin_at(n, k);
            }
        }
    }
    g.U.assign(S, 0.0);
    std::vector<double> d2(S);
    if (with_accel) g.accel.assign(N * 2 * S, 0.0);
    kernels::GravityBatch batch;
    batch.dim = 2;
    batch.bodies = N;
    batch.samples = S;
    batch.masses = ms.masses();
    batch.positions = g.positions;
    batch.potential = g.U;
    batch.min_dist2 = d2;
    if (with_accel) batch.accel = g.accel;
    kernels::gravity(batch);
    g.min_dist = std::sqrt(*std::min_element(d2.begin(), d2.end()));
    return g;
}

void check(const FourierLoop& loop, const MassSystem& ms) {
    if (ms.dim() != 2) throw InvalidArgument("loops are planar");
    if (loop.bodies() != ms.size()) throw DimensionMismatch("loop and mass system disagree on N");
}

std::size_t resolve_samples(const FourierLoop& loop, std::size_t samples) {
    const std::size_t S = samples == 0 ? default_samples(loop) : samples;
    if (S < 2 * loop.harmonics() + 1) throw InvalidArgument("too few samples for the loop harmonics");
    return S;
}

double loop_scale(const MassSystem& ms, double T) {
    return std::cbrt(ms.total_mass() * T * T / (4.0 * kPi * kPi));
}

}  // namespace

FourierLoop::FourierLoop(std::size_t bodies, std::size_t harmonics, double period)
    : bodies_(bodies), harmonics_(harmonics), period_(period), coeffs_(bodies * harmonics * 4, 0.0) {
    if (bodies < 2) throw InvalidArgument("a loop needs at least two bodies");
    if (harmonics < 1) throw InvalidArgument("a loop needs at least one harmonic");
    if (!(period > 0.0)) throw InvalidArgument("period must be positive");
}

double FourierLoop::omega() const { return 2.0 * kPi / period_; }

Configuration FourierLoop::position(double t) const {
    Configuration q = Configuration::zeros(bodies_, 2);
    for (std::size_t n = 1; n <= harmonics_; ++n) {
        const double c = std::cos(static_cast<double>(n) * omega() * t);
        const double s = std::sin(static_cast<double>(n) * omega() * t);
        for (std::size_t i = 0; i < bodies_; ++i)
            for (int ax = 0; ax < 2; ++ax) q(i, ax) += coeff(i, n, false, ax) * c + coeff(i, n, true, ax) * s;
    }
    return q;
}

Configuration FourierLoop::velocity(double t) const {
    Configuration v = Configuration::zeros(bodies_, 2);
    for (std::size_t n = 1; n <= harmonics_; ++n) {
        const double w = static_cast<double>(n) * omega();
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        for (std::size_t i = 0; i < bodies_; ++i)
            for (int ax = 0; ax < 2; ++ax)
                v(i, ax) += w * (-coeff(i, n, false, ax) * s + coeff(i, n, true, ax) * c);
    }
    return v;
}

std::size_t default_samples(const FourierLoop& loop) { return std::max<std::size_t>(64, 16 * loop.harmonics()); }

double kinetic_integral(const FourierLoop& loop, const MassSystem& ms) {
    check(loop, ms);
    const double w = loop.omega();
    double k = 0.0;
    for (std::size_t i = 0; i < loop.bodies(); ++i) {
        double body = 0.0;
        for (std::size_t n = 1; n <= loop.harmonics(); ++n) {
            double sq = 0.0;
            for (int ax = 0; ax < 2; ++ax)
                sq += loop.coeff(i, n, false, ax) * loop.coeff(i, n, false, ax) +
                      loop.coeff(i, n, true, ax) * loop.coeff(i, n, true, ax);
            body += static_cast<double>(n * n) * sq;
        }
        k += 0.5 * ms.mass(i) * body;
    }
    return k * w * w * 0.5 * loop.period();
}

double potential_integral(const FourierLoop& loop, const MassSystem& ms, std::size_t samples) {
    check(loop, ms);
    const Twiddles tw(resolve_samples(loop, samples));
    const GridEval g = evaluate_grid(loop, ms, tw, false);
    if (!(g.min_dist > 0.0)) throw CollisionOnGrid("loop collides on the quadrature grid");
    CompensatedSum s;
    for (double u : g.U) s.add(u);
    return s.value() * loop.period() / static_cast<double>(tw.S);
}

double action(const FourierLoop& loop, const MassSystem& ms, std::size_t samples) {
    return kinetic_integral(loop, ms) + potential_integral(loop, ms, samples);
}

std::vector<double> action_gradient(const FourierLoop& loop, const MassSystem& ms, std::size_t samples) {
    check(loop, ms);
    const Twiddles tw(resolve_samples(loop, samples));
    const GridEval g = evaluate_grid(loop, ms, tw, true);
    if (!(g.min_dist > 0.0)) throw CollisionOnGrid("loop collides on the quadrature grid");
    const std::size_t S = tw.S;
    const double w = loop.omega();
    const double h = loop.period() / static_cast<double>(S);
    std::vector<double> grad(loop.coeffs().size(), 0.0);
    for (std::size_t i = 0; i < loop.bodies(); ++i) {
        for (int ax = 0; ax < 2; ++ax) {
            const double* acc = &g.accel[(i * 2 + ax) * S];
            for (std::size_t n = 1; n <= loop.harmonics(); ++n) {
                // dU/dq_i = m_i q''_i along Newton's field.
                double pc = 0.0, ps = 0.0;
                for (std::size_t k = 0; k < S; ++k) {
                    pc += acc[k] * tw.cos_at(n, k);
                    ps += acc[k] * tw.sin_at(n, k);
                }
                const double kin = ms.mass(i) * static_cast<double>(n * n) * w * w * 0.5 * loop.period();
                grad[loop.index(i, n, false, ax)] = kin * loop.coeff(i, n, false, ax) + ms.mass(i) * h * pc;
                grad[loop.index(i, n, true, ax)] = kin * loop.coeff(i, n, true, ax) + ms.mass(i) * h * ps;
            }
        }
    }
    return grad;
}

double wirtinger_defect(const FourierLoop& loop, const MassSystem& ms) {
    check(loop, ms);
    const double w = loop.omega();
    double d = 0.0;
    for (std::size_t i = 0; i < loop.bodies(); ++i) {
        for (std::size_t n = 2; n <= loop.harmonics(); ++n) {
            double sq = 0.0;
            for (int ax = 0; ax < 2; ++ax)
                sq += loop.coeff(i, n, false, ax) * loop.coeff(i, n, false, ax) +
                      loop.coeff(i, n, true, ax) * loop.coeff(i, n, true, ax);
            d += 0.5 * ms.mass(i) * sq * static_cast<double>(n * n - 1);
        }
    }
    return d * w * w * 0.5 * loop.period();
}

double lower_bound(double T, double inf_IU2) {
    if (!(T > 0.0)) throw InvalidArgument("period must be positive");
    if (!(inf_IU2 > 0.0)) throw InvalidArgument("inf I U^2 must be positive");
    return 3.0 * std::cbrt(inf_IU2 * kPi * kPi / 2.0) * std::cbrt(T);
}

BoundReport equality_conditions(const FourierLoop& loop, const MassSystem& ms, double inf_IU2, double tol,
                                std::size_t samples) {
    check(loop, ms);
    const Twiddles tw(resolve_samples(loop, samples));
    const GridEval g = evaluate_grid(loop, ms, tw, false);
    if (!(g.min_dist > 0.0)) throw CollisionOnGrid("loop collides on the quadrature grid");
    const std::size_t S = tw.S;
    const std::size_t N = loop.bodies();
    const double w2 = loop.omega() * loop.omega();

    BoundReport r;
    r.inf_IU2_used = inf_IU2;
    const double kin = kinetic_integral(loop, ms);
    CompensatedSum usum;
    for (double u : g.U) usum.add(u);
    const double mean_U = usum.value() / static_cast<double>(S);
    r.action_value = kin + usum.value() * loop.period() / static_cast<double>(S);
    r.lower_bound = lower_bound(loop.period(), inf_IU2);
    r.gap = r.action_value - r.lower_bound;
    r.relative_gap = r.gap / r.lower_bound;

    r.first_harmonic_only.defect = kin > 0.0 ? wirtinger_defect(loop, ms) / kin : 0.0;
    double balance = 0.0, iu2_dev = 0.0, drift = 0.0;
    for (std::size_t k = 0; k < S; ++k) {
        double I = 0.0, cx = 0.0, cy = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double x = g.positions[(i * 2) * S + k];
            const double y = g.positions[(i * 2 + 1) * S + k];
            I += ms.mass(i) * (x * x + y * y);
            cx += ms.mass(i) * x;
            cy += ms.mass(i) * y;
        }
        balance = std::max(balance, std::abs(w2 * I - g.U[k]) / mean_U);
        iu2_dev = std::max(iu2_dev, std::abs(I * g.U[k] * g.U[k] - inf_IU2) / inf_IU2);
        drift = std::max(drift, std::hypot(cx, cy) / ms.total_mass());
    }
    r.balanced.defect = balance;
    r.minimizes_IU2.defect = iu2_dev;
    r.center_of_mass_drift = drift;
    r.first_harmonic_only.set = r.first_harmonic_only.defect < tol;
    r.balanced.set = balance < tol;
    r.minimizes_IU2.set = iu2_dev < tol;
    return r;
}

FourierLoop relative_equilibrium_loop(const Configuration& cfg, const MassSystem& ms, double T,
                                      std::size_t harmonics) {
    if (cfg.dim() != 2 || ms.dim() != 2) throw InvalidArgument("loops are planar");
    if (cfg.size() != ms.size()) throw DimensionMismatch("configuration and mass system disagree on N");
    FourierLoop loop(cfg.size(), harmonics, T);
    const double lambda = force_function(cfg, ms) / moment_of_inertia(cfg, ms);
    // s^3 w^2 = lambda keeps the rotating, rescaled configuration central.
    const double s = std::cbrt(lambda / (loop.omega() * loop.omega()));
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const double x = s * cfg(i, 0);
        const double y = s * cfg(i, 1);
        loop.coeff(i, 1, false, 0) = x;
        loop.coeff(i, 1, true, 0) = -y;
        loop.coeff(i, 1, false, 1) = y;
        loop.coeff(i, 1, true, 1) = x;
    }
    return loop;
}

EllipticMotionSpec to_elliptic_spec(const FourierLoop& loop) {
    EllipticMotionSpec spec;
    spec.dim = 2;
    for (std::size_t i = 0; i < loop.bodies(); ++i) {
        for (int ax = 0; ax < 2; ++ax) {
            spec.a.push_back(loop.coeff(i, 1, false, ax));
            spec.b.push_back(loop.coeff(i, 1, true, ax));
        }
    }
    spec.theta_law = UniformTheta{loop.period()};
    return spec;
}

namespace {

struct Descent {
    FourierLoop loop;
    double value = kInf;
    double grad_rel = kInf;
    std::size_t iterations = 0;
    bool converged = false;
    bool stalled = false;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

class ActionDescent {
public:
    ActionDescent(const MassSystem& ms, double T, const MinimizeActionOptions& opts)
        : ms_(ms), opts_(opts), scale_(loop_scale(ms, T)) {}

    Descent run(FourierLoop loop) const {
        Descent out;
        const std::size_t S = resolve_samples(loop, opts_.samples);
        std::vector<double> g;
        double f = eval(loop, S, g);
        if (f == kInf) {
            out.stalled = true;
            out.loop = loop;
            return out;
        }
        std::deque<std::pair<std::vector<double>, std::vector<double>>> mem;
        const double loose = 1e-7;
        bool collision_blocked = false;

        std::size_t it = 0;
        for (; it < opts_.max_iterations; ++it) {
            const double rel = std::sqrt(dot(g, g)) * scale_ / std::abs(f);
            out.grad_rel = rel;
            if (rel < opts_.grad_tol) {
                out.converged = true;
                break;
            }
            std::vector<double> d = direction(g, mem);
            double gd = dot(g, d);
            if (!(gd < 0.0)) {
                mem.clear();
                d = g;
                for (double& x : d) x = -x;
                gd = dot(g, d);
            }
            double alpha = mem.empty() ? std::min(1.0, 0.1 * scale_ / std::sqrt(dot(d, d))) : 1.0;

            bool accepted = false;
            bool hit_floor = false;
            FourierLoop trial = loop;
            std::vector<double> g_new;
            double f_new = kInf;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t k = 0; k < d.size(); ++k) trial.coeffs()[k] = loop.coeffs()[k] + alpha * d[k];
                f_new = eval(trial, S, g_new);
                if (f_new == kInf) hit_floor = true;
                if (f_new <= f + 1e-4 * alpha * gd) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                if (!mem.empty()) {
                    mem.clear();
                    continue;
                }
                collision_blocked = hit_floor;
                break;
            }
            std::vector<double> s(d.size()), y(d.size());
            for (std::size_t k = 0; k < d.size(); ++k) {
                s[k] = trial.coeffs()[k] - loop.coeffs()[k];
                y[k] = g_new[k] - g[k];
            }
            const double sy = dot(s, y);
            if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
                mem.emplace_back(std::move(s), std::move(y));
                if (mem.size() > opts_.memory) mem.pop_front();
            }
            loop = std::move(trial);
            f = f_new;
            g = std::move(g_new);
        }
        out.iterations = it;
        out.grad_rel = std::sqrt(dot(g, g)) * scale_ / std::abs(f);
        if (!out.converged) out.converged = out.grad_rel < loose;
        out.stalled = !out.converged && collision_blocked;
        out.loop = std::move(loop);
        out.value = f;
        return out;
    }

private:
    // Action and gradient, or +inf when a pair passes below the collision floor.
    double eval(const FourierLoop& loop, std::size_t S, std::vector<double>& g) const {
        const Twiddles tw(S);
        const GridEval ge = evaluate_grid(loop, ms_, tw, false);
        if (!(ge.min_dist > opts_.collision_floor * scale_)) return kInf;
        g = action_gradient(loop, ms_, S);
        return action(loop, ms_, S);
    }

    static std::vector<double> direction(const std::vector<double>& g,
                                         const std::deque<std::pair<std::vector<double>, std::vector<double>>>& mem) {
        std::vector<double> q = g;
        std::vector<double> a(mem.size());
        for (std::size_t k = mem.size(); k-- > 0;) {
            const auto& [s, y] = mem[k];
            a[k] = dot(s, q) / dot(s, y);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] -= a[k] * y[i];
        }
        if (!mem.empty()) {
            const auto& [s, y] = mem.back();
            const double gamma = dot(s, y) / dot(y, y);
            for (double& x : q) x *= gamma;
        }
        for (std::size_t k = 0; k < mem.size(); ++k) {
            const auto& [s, y] = mem[k];
            const double b = dot(y, q) / dot(s, y);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] += (a[k] - b) * s[i];
        }
        for (double& x : q) x = -x;
        return q;
    }

    const MassSystem& ms_;
    const MinimizeActionOptions& opts_;
    double scale_;
};

FourierLoop random_loop(const MassSystem& ms, double T, std::size_t harmonics, std::uint64_t seed, std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double rho = loop_scale(ms, T);
    FourierLoop loop(ms.size(), harmonics, T);
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t n = 1; n <= harmonics; ++n) {
            const double amp = n == 1 ? rho : 0.05 * rho / static_cast<double>(n * n);
            for (int sine = 0; sine < 2; ++sine)
                for (int ax = 0; ax < 2; ++ax) loop.coeff(i, n, sine == 1, ax) = amp * gauss(rng);
        }
    return loop;
}

}  // namespace

ActionMinimum minimize_action(const MassSystem& ms, double T, std::size_t harmonics, double inf_IU2,
                              const MinimizeActionOptions& opts, const std::optional<FourierLoop>& init) {
    if (ms.dim() != 2) throw InvalidArgument("action minimization is planar");
    if (!(T > 0.0)) throw InvalidArgument("period must be positive");
    if (harmonics < 1) throw InvalidArgument("need at least one harmonic");
    if (init) check(*init, ms);

    const ActionDescent descent(ms, T, opts);
    const std::size_t runs = init ? 1 : std::max<std::size_t>(1, opts.restarts);
    std::vector<Descent> results(runs);
    parallel_for(runs, opts.threads, [&](std::size_t r) {
        results[r] = descent.run(init ? *init : random_loop(ms, T, harmonics, opts.seed, r));
    });

    ActionMinimum out;
    const Descent* best = nullptr;
    for (const auto& d : results) {
        if (d.stalled) ++out.restarts_stalled;
        if (!d.converged) continue;
        ++out.restarts_converged;
        if (!best || d.value < best->value) best = &d;
    }
    if (!best) {
        if (out.restarts_stalled == runs) throw CollisionStall("every restart ran into the collision floor");
        throw NonConvergence("no restart reached the gradient tolerance");
    }
    out.loop = best->loop;
    out.gradient_norm = best->grad_rel;
    out.iterations = best->iterations;
    out.report = equality_conditions(out.loop, ms, inf_IU2, opts.flag_tol, opts.samples);
    out.success = out.report.relative_gap < opts.rel_tol;
    return out;
}

}  // namespace saari
