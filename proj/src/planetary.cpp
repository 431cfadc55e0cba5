#include "saari/planetary.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>

#include "saari/bessel.hpp"
#include "saari/core.hpp"
#include "saari/kronecker.hpp"
#include "saari/numeric.hpp"

namespace saari {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using i128 = __int128;

void check_masses(double m0, const std::vector<double>& m_tilde, double epsilon) {
    if (!(m0 > 0.0)) throw InvalidArgument("star mass must be positive");
    if (m_tilde.empty()) throw EmptyInput("no planets");
    for (double m : m_tilde)
        if (!(m > 0.0)) throw InvalidArgument("planet masses must be positive");
    if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
}

double norm_of(const double* v, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += v[a] * v[a];
    return std::sqrt(s);
}

double dist_of(const double* u, const double* v, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (u[a] - v[a]) * (u[a] - v[a]);
    return std::sqrt(s);
}

std::size_t body_count(const PhasePoint& x) {
    if (x.dim < 1 || x.dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
    if (x.p.size() != x.q.size() || x.q.size() % static_cast<std::size_t>(x.dim) != 0)
        throw DimensionMismatch("phase point arrays disagree");
    return x.q.size() / static_cast<std::size_t>(x.dim);
}

struct Frac {
    std::int64_t p = 0;
    std::int64_t q = 1;
};

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw InvalidArgument("period ratio overflows 64-bit arithmetic");
    return static_cast<std::int64_t>(v);
}

Frac reduce(i128 p, i128 q) {
    const i128 g = gcd128(p, q);
    return {narrow(p / g), narrow(q / g)};
}

// Bezout coefficient x with p x + q y = 1.
i128 inverse_coefficient(i128 p, i128 q) {
    i128 r0 = p, r1 = q, s0 = 1, s1 = 0;
    while (r1 != 0) {
        const i128 t = r0 / r1;
        i128 tmp = r0 - t * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - t * s1;
        s0 = s1;
        s1 = tmp;
    }
    return s0;
}

bool within(double r, const Frac& f, double tol) {
    return std::abs(r - static_cast<double>(f.p) / static_cast<double>(f.q)) <= tol * r;
}

// Fraction with q <= q_max matching r > 0 within relative tol, if any.
std::optional<Frac> rational_match(double r, std::int64_t q_max, double tol) {
    std::optional<Frac> found;
    i128 h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    double x = r;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(x);
        if (a > 1e15) break;
        const i128 ai = static_cast<i128>(a);
        const i128 h = ai * h1 + h2;
        const i128 k = ai * k1 + k2;
        if (k > q_max) break;
        const Frac f{narrow(h), narrow(k)};
        if (f.p > 0 && within(r, f, tol)) {
            found = f;
            break;
        }
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        const double rest = x - a;
        if (rest == 0.0) break;
        x = 1.0 / rest;
    }
    if (!found) return found;

    // The Farey neighbours are the closest other fractions with q <= q_max.
    const i128 p = found->p, q = found->q, n = q_max;
    const i128 x0 = inverse_coefficient(p, q);
    auto extend = [&](i128 base) {
        base %= q;
        if (base < 0) base += q;
        return base + q * ((n - base) / q);
    };
    const i128 q_right = extend(-x0);
    const i128 q_left = extend(x0);
    if (q_right > 0) {
        const Frac right{narrow((1 + p * q_right) / q), narrow(q_right)};
        if (within(r, right, tol)) throw AmbiguousPartition("period ratio matches two fractions");
    }
    if (q_left > 0 && p * q_left >= 1) {
        const Frac left{narrow((p * q_left - 1) / q), narrow(q_left)};
        if (left.p > 0 && within(r, left, tol)) throw AmbiguousPartition("period ratio matches two fractions");
    }
    return found;
}

double lagrange12(const UniformSeries& u, double t) {
    constexpr int kPts = 12;
    const double x = (t - u.t0) / u.dt;
    const auto n = static_cast<std::ptrdiff_t>(u.values.size());
    std::ptrdiff_t start = static_cast<std::ptrdiff_t>(std::floor(x)) - (kPts / 2 - 1);
    start = std::clamp<std::ptrdiff_t>(start, 0, n - kPts);
    const double local = x - static_cast<double>(start);
    // Barycentric weights (-1)^j binom(11, j) for equispaced nodes.
    static const double w[kPts] = {1, -11, 55, -165, 330, -462, 462, -330, 165, -55, 11, -1};
    double num = 0.0, den = 0.0;
    for (int j = 0; j < kPts; ++j) {
        const double d = local - j;
        if (d == 0.0) return u.values[static_cast<std::size_t>(start + j)];
        const double c = w[j] / d;
        num += c * u.values[static_cast<std::size_t>(start + j)];
        den += c;
    }
    return num / den;
}

double class_sum(const PlanetarySystem& ps, const std::vector<std::size_t>& members, double t) {
    double s = 0.0;
    for (std::size_t i : members) s += ps.m_tilde[i] / ps.m0 / radius(ps.orbits[i], t);
    return s;
}

}  // namespace

RescaledParams compute_rescaled_params(double m0, const std::vector<double>& m_tilde, double epsilon) {
    check_masses(m0, m_tilde, epsilon);
    RescaledParams r;
    for (double m : m_tilde) {
        const double rho = m / m0;
        const double M = 1.0 + epsilon * rho;
        r.M.push_back(M);
        r.mu.push_back(rho / M);
        r.varrho.push_back(rho);
    }
    return r;
}

double PlanetarySystem::time_scale() const { return epsilon * std::pow(m0, 7.0 / 3.0); }

void PlanetarySystem::validate() const {
    check_masses(m0, m_tilde, epsilon);
    if (orbits.size() != m_tilde.size()) throw DimensionMismatch("one orbit per planet is required");
    for (const auto& o : orbits) {
        o.validate();
        if (o.kappa != 1.0) throw InvalidArgument("planet orbits use kappa = 1 in rescaled units");
    }
}

PlanetaryIU planetary_I0_U0(const PlanetarySystem& ps, double t) {
    ps.validate();
    PlanetaryIU r;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto x = kepler_position(ps.orbits[i], t);
        const double r2 = x[0] * x[0] + x[1] * x[1];
        r.I0 += ps.m_tilde[i] * r2;
        r.U0 += ps.m_tilde[i] / ps.m0 / std::sqrt(r2);
    }
    return r;
}

PhasePoint heliocentric_to_inertial(const PhasePoint& hel) {
    const std::size_t n = body_count(hel);
    const int d = hel.dim;
    PhasePoint out = hel;
    for (std::size_t i = 1; i < n; ++i) {
        for (int a = 0; a < d; ++a) {
            out.q[i * d + a] = hel.q[a] + hel.q[i * d + a];
            out.p[a] -= hel.p[i * d + a];
        }
    }
    return out;
}

PhasePoint inertial_to_heliocentric(const PhasePoint& in) {
    const std::size_t n = body_count(in);
    const int d = in.dim;
    PhasePoint out = in;
    for (std::size_t i = 1; i < n; ++i) {
        for (int a = 0; a < d; ++a) {
            out.q[i * d + a] = in.q[i * d + a] - in.q[a];
            out.p[a] += in.p[i * d + a];
        }
    }
    return out;
}

double full_hamiltonian(const PhasePoint& in, const std::vector<double>& masses) {
    const std::size_t n = body_count(in);
    const int d = in.dim;
    if (masses.size() != n) throw DimensionMismatch("mass count differs from body count");
    double K = 0.0, U = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = norm_of(&in.p[i * d], d);
        K += p * p / (2.0 * masses[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = dist_of(&in.q[i * d], &in.q[j * d], d);
            if (r == 0.0) throw CollisionError("bodies coincide");
            U += masses[i] * masses[j] / r;
        }
    }
    return K - U;
}

double h_new(const std::vector<double>& y, const std::vector<double>& x, int dim, double m0,
             const std::vector<double>& m_tilde, double epsilon) {
    const RescaledParams rp = compute_rescaled_params(m0, m_tilde, epsilon);
    const std::size_t n = m_tilde.size();
    if (y.size() != n * dim || x.size() != n * dim) throw DimensionMismatch("planet arrays must hold N * dim values");
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yy = norm_of(&y[i * dim], dim);
        const double r = norm_of(&x[i * dim], dim);
        if (r == 0.0) throw CollisionError("planet at the star");
        h += yy * yy / (2.0 * rp.mu[i]) - rp.mu[i] * rp.M[i] / r;
    }
    double coupling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (int a = 0; a < dim; ++a) dot += y[i * dim + a] * y[j * dim + a];
            const double r = dist_of(&x[i * dim], &x[j * dim], dim);
            if (r == 0.0) throw CollisionError("planets coincide");
            coupling += dot - m_tilde[i] * m_tilde[j] / (m0 * m0) / r;
        }
    }
    return h + epsilon * coupling;
}

double rescaled_inertia(const std::vector<double>& x, int dim, double m0, const std::vector<double>& m_tilde,
                        double epsilon) {
    check_masses(m0, m_tilde, epsilon);
    const std::size_t n = m_tilde.size();
    if (x.size() != n * dim) throw DimensionMismatch("planet array must hold N * dim values");
    double s = 0.0, mass = 0.0;
    std::vector<double> first(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = norm_of(&x[i * dim], dim);
        s += m_tilde[i] * r * r;
        mass += m_tilde[i];
        for (int a = 0; a < dim; ++a) first[a] += m_tilde[i] * x[i * dim + a];
    }
    const double f = norm_of(first.data(), dim);
    return s - epsilon * f * f / (epsilon * mass + m0);
}

double rescaled_force(const std::vector<double>& x, int dim, double m0, const std::vector<double>& m_tilde,
                      double epsilon) {
    const RescaledParams rp = compute_rescaled_params(m0, m_tilde, epsilon);
    const std::size_t n = m_tilde.size();
    if (x.size() != n * dim) throw DimensionMismatch("planet array must hold N * dim values");
    double u = 0.0, coupling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = norm_of(&x[i * dim], dim);
        if (r == 0.0) throw CollisionError("planet at the star");
        u += rp.mu[i] * rp.M[i] / r;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rij = dist_of(&x[i * dim], &x[j * dim], dim);
            if (rij == 0.0) throw CollisionError("planets coincide");
            coupling += m_tilde[i] * m_tilde[j] / (m0 * m0) / rij;
        }
    }
    return u + epsilon * coupling;
}

std::size_t PeriodPartition::class_of(std::size_t i) const {
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (std::binary_search(classes[c].members.begin(), classes[c].members.end(), i)) return c;
    throw InvalidArgument("index not covered by the partition");
}

PeriodPartition period_partition(const std::vector<double>& periods, std::int64_t q_max, double tol) {
    if (periods.empty()) throw EmptyInput("no periods");
    if (q_max < 1) throw InvalidArgument("q_max must be positive");
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("tol must lie in (0, 1)");
    for (double p : periods)
        if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("periods must be positive");

    const std::size_t n = periods.size();
    // Edges i -> j carry T_j / T_i.
    std::vector<std::vector<std::pair<std::size_t, Frac>>> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto f = rational_match(periods[j] / periods[i], q_max, tol);
            if (!f) continue;
            edges[i].push_back({j, *f});
            edges[j].push_back({i, Frac{f->q, f->p}});
        }
    }

    PeriodPartition out;
    out.q_max = q_max;
    out.tol = tol;
    std::vector<bool> seen(n, false);
    for (std::size_t rep = 0; rep < n; ++rep) {
        if (seen[rep]) continue;
        std::vector<Frac> ratio(n);
        std::queue<std::size_t> todo;
        seen[rep] = true;
        ratio[rep] = {1, 1};
        todo.push(rep);
        std::vector<std::size_t> members;
        while (!todo.empty()) {
            const std::size_t i = todo.front();
            todo.pop();
            members.push_back(i);
            for (const auto& [j, f] : edges[i]) {
                if (seen[j]) continue;
                seen[j] = true;
                ratio[j] = reduce(static_cast<i128>(ratio[i].p) * f.p, static_cast<i128>(ratio[i].q) * f.q);
                todo.push(j);
            }
        }
        std::sort(members.begin(), members.end());

        PeriodClass c;
        c.members = members;
        c.representative = rep;
        i128 l = 1, g = 0;
        for (std::size_t i : members) {
            c.ratio_p.push_back(ratio[i].p);
            c.ratio_q.push_back(ratio[i].q);
            l = l / gcd128(l, ratio[i].p) * ratio[i].p;
            g = gcd128(g, ratio[i].q);
            narrow(l);
        }
        c.common_period = periods[rep] * static_cast<double>(l) / static_cast<double>(g);
        for (std::size_t m = 0; m < members.size(); ++m) {
            // (l / g) / (p / q)
            const i128 num = l * c.ratio_q[m];
            const i128 den = g * c.ratio_p[m];
            c.k.push_back(narrow(num / den));
        }
        out.classes.push_back(std::move(c));
    }
    return out;
}

ClassReduction difference_reduce(const UniformSeries& u, const PeriodPartition& partition, std::size_t j,
                                 std::size_t harmonics) {
    if (j >= partition.classes.size()) throw InvalidArgument("class index out of range");
    if (u.values.size() < 12 || !(u.dt > 0.0)) throw InvalidArgument("series needs at least 12 uniform samples");
    if (harmonics < 1) throw InvalidArgument("need at least one harmonic");

    double total_period = 0.0;
    std::vector<double> shifts;
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        total_period += partition.classes[c].common_period;
        if (c != j) shifts.push_back(partition.classes[c].common_period);
    }
    const double window = u.t_end() - u.t0;
    if (window < 4.0 * total_period) throw WindowTooShort("series window is shorter than four times the class periods");

    const double Pj = partition.classes[j].common_period;
    double shift_sum = 0.0;
    for (double s : shifts) shift_sum += s;
    const double guard = 6.0 * u.dt;
    const double t_start = u.t0 + shift_sum + guard;
    const double usable = u.t_end() - guard - t_start;
    const auto periods_used = static_cast<std::size_t>(std::floor(usable / Pj));
    if (periods_used < 1) throw WindowTooShort("no whole class period left after the difference shifts");

    // Every subset S of the other classes contributes (-1)^(m - |S|) u(t - sum_S T).
    const std::size_t m = shifts.size();
    std::vector<std::pair<double, double>> terms;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        double s = 0.0;
        std::size_t bits = 0;
        for (std::size_t b = 0; b < m; ++b) {
            if (mask & (std::size_t{1} << b)) {
                s += shifts[b];
                ++bits;
            }
        }
        terms.emplace_back(s, ((m - bits) % 2 == 0) ? 1.0 : -1.0);
    }

    const std::size_t per_period = std::max<std::size_t>(256, 4 * harmonics + 8);
    const std::size_t M = per_period * periods_used;
    const double span = Pj * static_cast<double>(periods_used);
    std::vector<double> w(M);
    double mean_u = 0.0;
    for (double v : u.values) mean_u += v;
    mean_u /= static_cast<double>(u.values.size());
    for (std::size_t s = 0; s < M; ++s) {
        const double t = t_start + span * static_cast<double>(s) / static_cast<double>(M);
        double acc = 0.0;
        for (const auto& [shift, sign] : terms) acc += sign * lagrange12(u, t - shift);
        w[s] = acc;
    }

    ClassReduction out;
    out.periods_used = periods_used;
    std::vector<std::complex<double>> coeff(harmonics + 1);
    for (std::size_t k = 1; k <= harmonics; ++k) {
        // Harmonic k of class j sits at multiple k * periods_used of the window.
        const std::size_t idx = k * periods_used;
        CompensatedSum re, im;
        for (std::size_t s = 0; s < M; ++s) {
            const double ang = kTwoPi * static_cast<double>((idx * s) % M) / static_cast<double>(M);
            re.add(w[s] * std::cos(ang));
            im.add(-w[s] * std::sin(ang));
        }
        std::complex<double> what(re.value() / static_cast<double>(M), im.value() / static_cast<double>(M));
        // Undo the window origin and the operator symbol prod (e^{-i w k T} - 1).
        const double omega = kTwoPi * static_cast<double>(k) / Pj;
        what *= std::polar(1.0, -omega * (t_start - u.t0));
        std::complex<double> symbol(1.0, 0.0);
        for (double sft : shifts) symbol *= std::polar(1.0, -omega * sft) - 1.0;
        if (std::abs(symbol) < 1e-6) {
            ++out.harmonics_skipped;
            out.amplitudes.push_back(0.0);
            continue;
        }
        coeff[k] = what / symbol;
        out.amplitudes.push_back(std::abs(coeff[k]));
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    constexpr std::size_t kRecon = 512;
    for (std::size_t s = 0; s < kRecon; ++s) {
        const double phase = kTwoPi * static_cast<double>(s) / kRecon;
        double v = 0.0;
        for (std::size_t k = 1; k <= harmonics; ++k)
            v += 2.0 * std::real(coeff[k] * std::polar(1.0, phase * static_cast<double>(k)));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.defect = (hi - lo) / std::max(1.0, std::abs(mean_u));
    return out;
}

PlanetaryVerdict saari_planetary_verdict(const PlanetarySystem& ps, const PlanetaryVerdictOptions& opts) {
    ps.validate();
    if (opts.n_probe < 1) throw InvalidArgument("n_probe must be positive");
    std::vector<double> periods;
    for (const auto& o : ps.orbits) periods.push_back(o.period());
    const PeriodPartition part = period_partition(periods, opts.q_max, opts.partition_tol);

    // Sample I0 and U0: one common period for a single class, otherwise a
    // window long enough for the difference reduction.
    UniformSeries useries;
    std::vector<double> I0s;
    if (part.classes.size() == 1) {
        constexpr std::size_t S = 2048;
        useries.dt = part.classes[0].common_period / S;
        for (std::size_t s = 0; s < S; ++s) {
            const PlanetaryIU v = planetary_I0_U0(ps, useries.dt * static_cast<double>(s));
            I0s.push_back(v.I0);
            useries.values.push_back(v.U0);
        }
    } else {
        double total = 0.0;
        for (const auto& c : part.classes) total += c.common_period;
        const double shortest = *std::min_element(periods.begin(), periods.end());
        useries.dt = shortest / 256.0;
        const double window = 8.0 * total;
        const auto S = static_cast<std::size_t>(std::ceil(window / useries.dt)) + 1;
        if (S > (std::size_t{1} << 23)) throw InvalidArgument("period spread too large for the sampled window");
        for (std::size_t s = 0; s < S; ++s) {
            const PlanetaryIU v = planetary_I0_U0(ps, useries.dt * static_cast<double>(s));
            I0s.push_back(v.I0);
            useries.values.push_back(v.U0);
        }
    }

    PlanetaryVerdict v;
    v.defect_I0 = constancy_defect(I0s);
    v.defect_U0 = constancy_defect(useries.values);
    v.is_constant_I0 = v.defect_I0 < opts.tol_const;
    bool any_ecc = false;
    for (const auto& o : ps.orbits) {
        v.eccentricity_flags.push_back(o.e > opts.tol_e);
        any_ecc = any_ecc || o.e > opts.tol_e;
    }
    v.verdict = v.is_constant_I0 ? "circular" : "non-circular";
    v.consistent = v.is_constant_I0 ? !any_ecc : any_ecc;

    for (std::size_t ci = 0; ci < part.classes.size(); ++ci) {
        const PeriodClass& c = part.classes[ci];
        ClassWitness w;
        w.members = c.members;
        w.period = c.common_period;
        std::int64_t L = 1;
        std::vector<double> phases;
        for (std::size_t m = 0; m < c.members.size(); ++m) {
            if (ps.orbits[c.members[m]].e <= opts.tol_e) continue;
            w.eccentric = true;
            L = std::lcm(L, c.k[m]);
        }
        if (!v.is_constant_I0 && w.eccentric) {
            const double omega = kTwoPi / c.common_period;
            for (std::size_t m = 0; m < c.members.size(); ++m) {
                if (ps.orbits[c.members[m]].e <= opts.tol_e) continue;
                phases.push_back(static_cast<double>(L) * omega * ps.orbits[c.members[m]].iota);
            }
            const auto L64 = static_cast<std::uint64_t>(L);
            if (opts.n_probe >= L64) {
                try {
                    const MultiPhaseWitness pw = phase_witness(phases, 0.25, opts.n_probe / L64);
                    w.n = pw.n * L64;
                } catch (const NotFound&) {
                }
            }
            if (w.n) {
                const std::uint64_t n = *w.n;
                for (std::size_t m = 0; m < c.members.size(); ++m) {
                    const auto k = static_cast<std::uint64_t>(c.k[m]);
                    if (n % k != 0) continue;
                    const KeplerOrbit& o = ps.orbits[c.members[m]];
                    const auto order = static_cast<int>(n / k);
                    const double rho = ps.m_tilde[c.members[m]] / ps.m0;
                    const double amp = 2.0 * rho / o.a * bessel_J(order, order * o.e);
                    const double arg = static_cast<double>(n) * omega * o.iota;
                    w.coeff_cos += amp * std::cos(arg);
                    w.coeff_sin += amp * std::sin(arg);
                }
                const std::size_t S = std::max<std::size_t>(2048, 16 * n);
                CompensatedSum q;
                for (std::size_t s = 0; s < S; ++s) {
                    const double t = c.common_period * static_cast<double>(s) / static_cast<double>(S);
                    const double ang = kTwoPi * static_cast<double>((n * s) % S) / static_cast<double>(S);
                    q.add(class_sum(ps, c.members, t) * std::cos(ang));
                }
                w.quadrature_cos = 2.0 * q.value() / static_cast<double>(S);
            }
        }
        if (part.classes.size() > 1 && !v.is_constant_I0)
            w.reduce_defect = difference_reduce(useries, part, ci).defect;
        const bool coefficient_nonzero = w.n.has_value() && w.coeff_cos > 0.0;
        w.flagged = coefficient_nonzero && (part.classes.size() == 1 || w.reduce_defect > opts.reduce_flag);
        v.classes.push_back(std::move(w));
    }
    return v;
}

}  // namespace saari
