#pragma once

// Elliptical-type motions q_i(t) = a_i cos(theta(t)) + b_i sin(theta(t)):
// pair coefficients of |q_j - q_k|^2, the harmonic content of the force
// function along such a motion, and the rigidity verdict.

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "saari/core.hpp"

namespace saari {

/// theta(t) = 2 pi t / period.
struct UniformTheta {
    double period = 1.0;
};

/// Monotone samples of theta(t).
struct SampledTheta {
    std::vector<double> times;
    std::vector<double> thetas;
};

using ThetaLaw = std::variant<UniformTheta, SampledTheta>;

struct EllipticMotionSpec {
    int dim = 2;
    std::vector<double> a;  ///< body-major, N * dim
    std::vector<double> b;  ///< body-major, N * dim
    ThetaLaw theta_law = UniformTheta{};

    std::size_t size() const { return dim > 0 ? a.size() / static_cast<std::size_t>(dim) : 0; }

    /// Shape checks, N >= 2, and (for sampled laws) monotone samples whose
    /// range covers an interval of length pi.
    void validate() const;

    Configuration at_angle(double theta) const;
    /// Positions at time t; sampled laws are interpolated linearly.
    Configuration at_time(double t) const;
    /// Angle values the motion passes through: one uniform period, or the
    /// sampled angles.
    std::vector<double> angle_samples(std::size_t count) const;
};

/// Symmetric N x N tables, row-major; the diagonal is unused.
struct PairCoefficients {
    std::size_t n = 0;
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> C;
    std::vector<double> phase;  ///< in (-pi, pi]; 0 where B is negligible

    double a(std::size_t j, std::size_t k) const { return A[j * n + k]; }
    double b(std::size_t j, std::size_t k) const { return B[j * n + k]; }
    double c(std::size_t j, std::size_t k) const { return C[j * n + k]; }
    double theta(std::size_t j, std::size_t k) const { return phase[j * n + k]; }
};

/// |q_j - q_k|^2 = A_jk + B_jk cos(2 theta + phase_jk). Throws
/// PermanentCollision when a_j = a_k and b_j = b_k.
PairCoefficients pair_coefficients(const EllipticMotionSpec& spec);

/// Ratio c_{l+1} / c_l of consecutive coefficients in the even-power series
/// of the n-th harmonic.
double series_ratio(std::size_t l, std::size_t n);

struct DSeriesResult {
    double value = 0.0;
    std::size_t terms = 0;
    double last_term = 0.0;  ///< relative size of the last term added
    bool slow_mode = false;  ///< C == 1, extended term budget
};

/// Dimensionless n-th harmonic magnitude of (1 + C cos psi)^(-1/2),
/// summed as C^n t_n sum_l c_l C^(2l) with Kahan compensation.
DSeriesResult d_series(double C, std::size_t n, double tol_series = 1e-10, std::size_t max_terms = 1'000'000);

/// D^(n)_jk = m_j m_k / sqrt(A_jk) * d_series(C_jk, n): the magnitude of the
/// n-th harmonic (in 2 theta) of pair (j, k)'s contribution to U.
DSeriesResult d_coefficient(const PairCoefficients& pc, const MassSystem& ms, std::size_t j, std::size_t k,
                            std::size_t n, double tol_series = 1e-10, std::size_t max_terms = 1'000'000);

/// Harmonic magnitudes h_0..h_{n_max} of U(q(theta)) as a function of
/// psi = 2 theta, by periodic trapezoid quadrature on `samples` points.
/// Needs a uniform theta law. Throws CollisionOnGrid.
std::vector<double> fourier_of_U(const EllipticMotionSpec& spec, const MassSystem& ms, std::size_t n_max,
                                 std::size_t samples = 4096);

struct RigidityVerdict {
    bool rigid = false;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    double max_C = 0.0;
};

/// Rigid iff max_jk C_jk <= tol; otherwise the witness is the argmax pair.
RigidityVerdict rigidity_verdict(const EllipticMotionSpec& spec, const MassSystem& ms, double tol = 1e-8);

}  // namespace saari
