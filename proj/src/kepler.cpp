#include "saari/kepler.hpp"

#include <cmath>
#include <numbers>

#include "saari/bessel.hpp"
#include "saari/core.hpp"

namespace saari {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

KeplerOrbit KeplerOrbit::from_period(double period, double e, double iota, double kappa) {
    if (!(period > 0.0)) throw InvalidArgument("period must be positive");
    const double n = kTwoPi / period;
    KeplerOrbit o{std::cbrt(kappa / (n * n)), e, iota, kappa};
    o.validate();
    return o;
}

void KeplerOrbit::validate() const {
    if (!(a > 0.0)) throw InvalidArgument("semi-major axis must be positive");
    if (!(e >= 0.0 && e < 1.0)) throw InvalidArgument("eccentricity must lie in [0, 1)");
    if (!(kappa > 0.0)) throw InvalidArgument("gravitational parameter must be positive");
}

double KeplerOrbit::mean_motion() const { return std::sqrt(kappa / (a * a * a)); }
double KeplerOrbit::period() const { return kTwoPi / mean_motion(); }
double KeplerOrbit::mean_anomaly(double t) const { return mean_motion() * (t - iota); }

double solve_kepler(double e, double tau, double tol) {
    if (!(e >= 0.0 && e < 1.0)) throw InvalidArgument("eccentricity must lie in [0, 1)");
    if (e == 0.0) return tau;

    // Reduce to [-pi, pi) and add the turns back at the end.
    const double turns = std::floor((tau + std::numbers::pi) / kTwoPi);
    const double m = tau - turns * kTwoPi;

    // E - m = e sin E lies in [-e, e] and f is increasing, so the root is
    // bracketed.
    double lo = m - e;
    double hi = m + e;
    double E = m + 0.85 * e * (std::sin(m) >= 0.0 ? 1.0 : -1.0);
    if (E < lo || E > hi) E = m;
    for (int it = 0; it < 100; ++it) {
        const double f = E - e * std::sin(E) - m;
        if (std::abs(f) <= tol) break;
        if (f > 0.0)
            hi = E;
        else
            lo = E;
        const double fp = 1.0 - e * std::cos(E);
        double next = E - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == E) break;
        E = next;
    }
    return E + turns * kTwoPi;
}

double radius(const KeplerOrbit& orbit, double t) {
    const double E = solve_kepler(orbit.e, orbit.mean_anomaly(t));
    return orbit.a * (1.0 - orbit.e * std::cos(E));
}

std::array<double, 2> kepler_position(const KeplerOrbit& orbit, double t) {
    const double E = solve_kepler(orbit.e, orbit.mean_anomaly(t));
    const double s = std::sqrt(1.0 - orbit.e * orbit.e);
    return {orbit.a * (std::cos(E) - orbit.e), orbit.a * s * std::sin(E)};
}

std::array<double, 2> kepler_velocity(const KeplerOrbit& orbit, double t) {
    const double E = solve_kepler(orbit.e, orbit.mean_anomaly(t));
    const double s = std::sqrt(1.0 - orbit.e * orbit.e);
    const double Edot = orbit.mean_motion() / (1.0 - orbit.e * std::cos(E));
    return {-orbit.a * std::sin(E) * Edot, orbit.a * s * std::cos(E) * Edot};
}

std::vector<double> inverse_radius_expansion(double e, std::size_t n_max) {
    if (!(e >= 0.0 && e < 1.0)) throw InvalidArgument("eccentricity must lie in [0, 1)");
    std::vector<double> c(n_max + 1, 0.0);
    c[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const int k = static_cast<int>(n);
        c[n] = 2.0 * bessel_J(k, k * e);
    }
    return c;
}

double evaluate_cosine_series(const std::vector<double>& coeffs, double tau) {
    if (coeffs.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t n = coeffs.size() - 1; n >= 1; --n) s += coeffs[n] * std::cos(static_cast<double>(n) * tau);
    return coeffs[0] + s;
}

}  // namespace saari
