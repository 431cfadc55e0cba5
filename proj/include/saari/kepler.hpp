#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace saari {

/// Planar bound Kepler orbit with pericenter on the +x axis.
struct KeplerOrbit {
    double a = 1.0;      ///< semi-major axis
    double e = 0.0;      ///< eccentricity in [0, 1)
    double iota = 0.0;   ///< time of pericenter passage
    double kappa = 1.0;  ///< gravitational parameter

    /// Orbit with the given period, using the third law n^2 a^3 = kappa.
    static KeplerOrbit from_period(double period, double e, double iota = 0.0, double kappa = 1.0);

    void validate() const;
    double mean_motion() const;
    double period() const;
    double mean_anomaly(double t) const;
};

/// Solves E - e sin E = tau by safeguarded Newton iteration. Continuous in
/// tau with E(tau + 2 pi) = E(tau) + 2 pi.
double solve_kepler(double e, double tau, double tol = 1e-14);

/// r(t) = a (1 - e cos E).
double radius(const KeplerOrbit& orbit, double t);

std::array<double, 2> kepler_position(const KeplerOrbit& orbit, double t);
std::array<double, 2> kepler_velocity(const KeplerOrbit& orbit, double t);

/// Cosine coefficients of 1 / (1 - e cos E) in the mean anomaly:
/// [1, 2 J_1(e), 2 J_2(2e), ..., 2 J_nmax(nmax e)].
std::vector<double> inverse_radius_expansion(double e, std::size_t n_max);

/// Evaluates 1 + sum_n c_n cos(n tau) for coefficients from
/// inverse_radius_expansion.
double evaluate_cosine_series(const std::vector<double>& coeffs, double tau);

}  // namespace saari
