#pragma once

// Rescaled planetary problem: mass parameters, the heliocentric change of
// variables, the restricted (epsilon = 0) moment of inertia and force
// function, commensurability classes of periods, isolation of one class
// from a sampled signal, and the circular-orbit verdict.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saari/core.hpp"
#include "saari/kepler.hpp"

namespace saari {

struct RescaledParams {
    std::vector<double> M;       ///< 1 + eps m~_i / m0
    std::vector<double> mu;      ///< (m~_i / m0) / M_i
    std::vector<double> varrho;  ///< m~_i / m0
};

RescaledParams compute_rescaled_params(double m0, const std::vector<double>& m_tilde, double epsilon);

struct PlanetarySystem {
    double m0 = 1.0;
    std::vector<double> m_tilde;
    double epsilon = 0.0;
    std::vector<KeplerOrbit> orbits;  ///< kappa = 1

    /// Factor eps * m0^(7/3) relating physical and rescaled time.
    double time_scale() const;
    std::size_t size() const { return m_tilde.size(); }
    void validate() const;
};

/// I0 = sum m~_i |x_i|^2 and U0 = sum varrho_i / |x_i| along the decoupled
/// Kepler orbits.
struct PlanetaryIU {
    double I0 = 0.0;
    double U0 = 0.0;
};
PlanetaryIU planetary_I0_U0(const PlanetarySystem& ps, double t);

/// Phase-space point of N + 1 bodies: flat arrays of (N + 1) * dim entries,
/// index 0 is the star.
struct PhasePoint {
    int dim = 2;
    std::vector<double> p;
    std::vector<double> q;
};

/// (P, Q) -> (p, q): q0 = Q0, q_i = Q0 + Q_i, p0 = P0 - sum P_i, p_i = P_i.
PhasePoint heliocentric_to_inertial(const PhasePoint& hel);
PhasePoint inertial_to_heliocentric(const PhasePoint& in);

/// H = sum |p_i|^2 / 2 m_i - sum m_i m_j / |q_i - q_j| over all N + 1 bodies.
double full_hamiltonian(const PhasePoint& in, const std::vector<double>& masses);

/// Rescaled Hamiltonian in planet variables (y_i, x_i), each N * dim.
double h_new(const std::vector<double>& y, const std::vector<double>& x, int dim, double m0,
             const std::vector<double>& m_tilde, double epsilon);

/// Bracketed moment of inertia and force function in rescaled variables;
/// multiply by eps * m0^(4/3) for the barycentric physical values.
double rescaled_inertia(const std::vector<double>& x, int dim, double m0, const std::vector<double>& m_tilde,
                        double epsilon);
double rescaled_force(const std::vector<double>& x, int dim, double m0, const std::vector<double>& m_tilde,
                      double epsilon);

struct PeriodClass {
    std::vector<std::size_t> members;    ///< increasing indices
    std::size_t representative = 0;      ///< smallest member
    std::vector<std::int64_t> ratio_p;   ///< T_i / T_rep = p / q, lowest terms
    std::vector<std::int64_t> ratio_q;
    double common_period = 0.0;          ///< smallest T with T / T_i integer
    std::vector<std::int64_t> k;         ///< T / T_i per member
};

struct PeriodPartition {
    std::vector<PeriodClass> classes;
    std::int64_t q_max = 0;
    double tol = 0.0;
    /// Class index of body i.
    std::size_t class_of(std::size_t i) const;
};

/// Groups periods whose ratios are p/q with q <= q_max within relative tol,
/// closed transitively. Throws AmbiguousPartition when two such fractions
/// match one ratio.
PeriodPartition period_partition(const std::vector<double>& periods, std::int64_t q_max = 10'000,
                                 double tol = 1e-9);

/// u(t0 + s dt) = values[s].
struct UniformSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;
    double t_end() const { return t0 + dt * static_cast<double>(values.size() - 1); }
};

struct ClassReduction {
    double defect = 0.0;              ///< peak-to-peak of the class part / max(1, |mean u|)
    std::vector<double> amplitudes;   ///< |u_hat_k|, k = 1..harmonics
    std::size_t periods_used = 0;
    std::size_t harmonics_skipped = 0;  ///< ill-conditioned divisors left out
};

/// Annihilates every class except `j` with u(t - T_i) - u(t) differences,
/// recovers the class-j Fourier coefficients by dividing out the operator
/// symbol, and measures the oscillation they describe. Off-grid shifts use
/// 12-point Lagrange interpolation. Throws WindowTooShort when the series is
/// shorter than four times the sum of class periods.
ClassReduction difference_reduce(const UniformSeries& u, const PeriodPartition& partition, std::size_t j,
                                 std::size_t harmonics = 64);

struct ClassWitness {
    std::vector<std::size_t> members;
    double period = 0.0;
    bool eccentric = false;       ///< some member has e > 0
    std::optional<std::uint64_t> n;  ///< harmonic index (in 2 pi / period)
    double coeff_cos = 0.0;       ///< sum over k_i | n of 2 varrho/a J_{n/k}(n e / k) cos(n w iota)
    double coeff_sin = 0.0;
    double quadrature_cos = 0.0;  ///< the same coefficient of the class sum by quadrature
    double reduce_defect = 0.0;   ///< from difference_reduce (multi-class systems)
    bool flagged = false;         ///< class sum shown non-constant
};

struct PlanetaryVerdict {
    std::string verdict;  ///< "circular" or "non-circular"
    bool is_constant_I0 = false;
    double defect_I0 = 0.0;
    double defect_U0 = 0.0;
    std::vector<bool> eccentricity_flags;  ///< e_i > tol_e
    bool consistent = true;  ///< constant I0 agrees with all e_i ~ 0
    std::vector<ClassWitness> classes;
};

struct PlanetaryVerdictOptions {
    std::uint64_t n_probe = 200;
    double tol_const = 1e-8;
    double tol_e = 1e-12;
    double reduce_flag = 1e-6;
    std::int64_t q_max = 10'000;
    double partition_tol = 1e-9;
};

PlanetaryVerdict saari_planetary_verdict(const PlanetarySystem& ps, const PlanetaryVerdictOptions& opts = {});

}  // namespace saari
