#include "saari/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "saari/kernels.hpp"
#include "saari/numeric.hpp"

namespace saari {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_monotone(const std::vector<double>& v) {
    const bool up = std::is_sorted(v.begin(), v.end());
    const bool down = std::is_sorted(v.rbegin(), v.rend());
    return up || down;
}

}  // namespace

void EllipticMotionSpec::validate() const {
    if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
    if (a.size() != b.size()) throw DimensionMismatch("a and b hold different numbers of coordinates");
    if (a.size() % static_cast<std::size_t>(dim) != 0) throw DimensionMismatch("coordinate count is not N * dim");
    if (size() < 2) throw InvalidArgument("an elliptic motion needs at least two bodies");
    if (const auto* law = std::get_if<UniformTheta>(&theta_law)) {
        if (!(law->period > 0.0)) throw InvalidArgument("theta period must be positive");
    } else {
        const auto& s = std::get<SampledTheta>(theta_law);
        if (s.times.size() != s.thetas.size() || s.times.size() < 2)
            throw InvalidArgument("sampled theta law needs matching times and angles");
        for (std::size_t i = 1; i < s.times.size(); ++i)
            if (!(s.times[i] > s.times[i - 1])) throw InvalidArgument("theta sample times must increase");
        if (!is_monotone(s.thetas)) throw InvalidArgument("sampled theta law must be monotone");
        const auto [lo, hi] = std::minmax_element(s.thetas.begin(), s.thetas.end());
        if (*hi - *lo < kPi) throw InvalidArgument("theta range must cover an interval of length pi");
    }
}

Configuration EllipticMotionSpec::at_angle(double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> q(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) q[i] = a[i] * c + b[i] * s;
    return Configuration(dim, std::move(q));
}

Configuration EllipticMotionSpec::at_time(double t) const {
    if (const auto* law = std::get_if<UniformTheta>(&theta_law)) return at_angle(2.0 * kPi * t / law->period);
    const auto& s = std::get<SampledTheta>(theta_law);
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - s.times.begin());
    hi = std::clamp<std::size_t>(hi, 1, s.times.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
    return at_angle(s.thetas[lo] + w * (s.thetas[hi] - s.thetas[lo]));
}

std::vector<double> EllipticMotionSpec::angle_samples(std::size_t count) const {
    std::vector<double> out;
    if (std::holds_alternative<UniformTheta>(theta_law)) {
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(2.0 * kPi * static_cast<double>(i) / static_cast<double>(count));
    } else {
        const auto& s = std::get<SampledTheta>(theta_law);
        const double lo = s.thetas.front();
        const double hi = s.thetas.back();
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

PairCoefficients pair_coefficients(const EllipticMotionSpec& spec) {
    spec.validate();
    const std::size_t n = spec.size();
    const int dim = spec.dim;
    PairCoefficients pc;
    pc.n = n;
    pc.A.assign(n * n, 0.0);
    pc.B.assign(n * n, 0.0);
    pc.C.assign(n * n, 0.0);
    pc.phase.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            double aa = 0.0, bb = 0.0, ab = 0.0;
            for (int x = 0; x < dim; ++x) {
                const double da = spec.a[j * dim + x] - spec.a[k * dim + x];
                const double db = spec.b[j * dim + x] - spec.b[k * dim + x];
                aa += da * da;
                bb += db * db;
                ab += da * db;
            }
            if (aa == 0.0 && bb == 0.0) throw PermanentCollision("bodies share both a and b vectors");
            const double A = 0.5 * (aa + bb);
            const double cosine_part = 0.5 * (aa - bb);
            // B cos(2t + phase) = B cos(phase) cos 2t - B sin(phase) sin 2t
            const double B = std::hypot(cosine_part, ab);
            const double C = std::min(1.0, B / A);
            double phase = 0.0;
            if (B > 1e-14 * A) {
                phase = std::atan2(-ab, cosine_part);
                if (phase <= -kPi) phase += 2.0 * kPi;
            }
            for (auto [r, c] : {std::pair{j, k}, std::pair{k, j}}) {
                pc.A[r * n + c] = A;
                pc.B[r * n + c] = B;
                pc.C[r * n + c] = C;
                pc.phase[r * n + c] = phase;
            }
        }
    }
    return pc;
}

double series_ratio(std::size_t l, std::size_t n) {
    const double L = static_cast<double>(l);
    const double N = static_cast<double>(n);
    return (2.0 * L + 0.5 + N) * (2.0 * L + 1.5 + N) / (4.0 * (L + 1.0) * (L + 1.0 + N));
}

DSeriesResult d_series(double C, std::size_t n, double tol_series, std::size_t max_terms) {
    if (n < 1) throw InvalidArgument("harmonic index must be at least 1");
    if (!(C >= 0.0 && C <= 1.0)) throw InvalidArgument("C must lie in [0, 1]");
    DSeriesResult r;
    if (C == 0.0) return r;

    // |binom(-1/2, n)| / 2^n
    double lead = 1.0;
    for (std::size_t i = 1; i <= n; ++i) lead *= 0.5 * (static_cast<double>(i) - 0.5) / static_cast<double>(i);

    r.slow_mode = C >= 1.0 - 1e-12;
    const std::size_t budget = r.slow_mode ? std::max<std::size_t>(max_terms, 100'000'000) : max_terms;
    const double C2 = C * C;

    CompensatedSum sum;
    sum.add(1.0);
    double term = 1.0;
    bool converged = false;
    std::size_t l = 0;
    for (; l < budget; ++l) {
        term *= series_ratio(l, n) * C2;
        sum.add(term);
        if (term < tol_series * sum.value()) {
            converged = true;
            ++l;
            break;
        }
    }
    r.terms = l + 1;
    r.last_term = term / sum.value();
    if (!converged) throw SeriesNotConverged("harmonic series did not reach the requested tolerance");
    r.value = std::pow(C, static_cast<double>(n)) * lead * sum.value();
    return r;
}

DSeriesResult d_coefficient(const PairCoefficients& pc, const MassSystem& ms, std::size_t j, std::size_t k,
                            std::size_t n, double tol_series, std::size_t max_terms) {
    if (j >= pc.n || k >= pc.n || j == k) throw InvalidArgument("pair indices out of range");
    if (ms.size() != pc.n) throw DimensionMismatch("mass count differs from pair table");
    DSeriesResult r = d_series(pc.c(j, k), n, tol_series, max_terms);
    r.value *= ms.mass(j) * ms.mass(k) / std::sqrt(pc.a(j, k));
    return r;
}

std::vector<double> fourier_of_U(const EllipticMotionSpec& spec, const MassSystem& ms, std::size_t n_max,
                                 std::size_t samples) {
    spec.validate();
    if (!std::holds_alternative<UniformTheta>(spec.theta_law))
        throw InvalidArgument("harmonic analysis needs a uniform theta law");
    if (ms.size() != spec.size() || ms.dim() != spec.dim) throw DimensionMismatch("mass system does not match spec");
    if (samples < 2 * n_max + 1) throw InvalidArgument("too few quadrature samples for the requested harmonics");

    const std::size_t N = spec.size();
    const int dim = spec.dim;
    const std::size_t S = samples;

    // U has period pi in theta; psi = 2 theta sweeps one full period.
    std::vector<double> cos_table(S), sin_table(S);
    for (std::size_t s = 0; s < S; ++s) {
        const double psi = 2.0 * kPi * static_cast<double>(s) / static_cast<double>(S);
        cos_table[s] = std::cos(psi);
        sin_table[s] = std::sin(psi);
    }

    std::vector<double> pos(N * dim * S);
    for (std::size_t s = 0; s < S; ++s) {
        const double theta = kPi * static_cast<double>(s) / static_cast<double>(S);
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        for (std::size_t i = 0; i < N; ++i)
            for (int x = 0; x < dim; ++x)
                pos[(i * dim + x) * S + s] = spec.a[i * dim + x] * c + spec.b[i * dim + x] * sn;
    }
    std::vector<double> U(S), dmin(S);
    kernels::GravityBatch batch;
    batch.dim = dim;
    batch.bodies = N;
    batch.samples = S;
    batch.masses = ms.masses();
    batch.positions = pos;
    batch.potential = U;
    batch.min_dist2 = dmin;
    kernels::gravity(batch);
    for (double d : dmin)
        if (!(d > 0.0)) throw CollisionOnGrid("bodies collide on the quadrature grid");

    std::vector<double> h(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        CompensatedSum re, im;
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t idx = (n * s) % S;
            re.add(U[s] * cos_table[idx]);
            im.add(-U[s] * sin_table[idx]);
        }
        h[n] = std::hypot(re.value(), im.value()) / static_cast<double>(S);
    }
    return h;
}

RigidityVerdict rigidity_verdict(const EllipticMotionSpec& spec, const MassSystem& ms, double tol) {
    if (ms.size() != spec.size()) throw DimensionMismatch("mass system does not match spec");
    const PairCoefficients pc = pair_coefficients(spec);
    RigidityVerdict v;
    std::pair<std::size_t, std::size_t> arg{0, 1};
    for (std::size_t j = 0; j < pc.n; ++j) {
        for (std::size_t k = j + 1; k < pc.n; ++k) {
            if (pc.c(j, k) > v.max_C) {
                v.max_C = pc.c(j, k);
                arg = {j, k};
            }
        }
    }
    v.rigid = v.max_C <= tol;
    if (!v.rigid) v.witness = arg;
    return v;
}

}  // namespace saari
