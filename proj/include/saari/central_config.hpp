#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "saari/core.hpp"
#include "saari/elliptic.hpp"

namespace saari {

struct CentralResidual {
    /// residual_k = sum_{j != k} m_j m_k (q_j - q_k) / r^3 + lambda m_k q_k
    Configuration residuals;
    /// Mass-weighted RMS of residual_k / m_k, relative to the mass-weighted
    /// RMS of lambda q_k; scale invariant.
    double norm = 0.0;
    double lambda = 0.0;  ///< U / I
};

CentralResidual central_residual(const Configuration& cfg, const MassSystem& ms);

/// I U^2, invariant under scaling and rotation about the origin.
double iu2(const Configuration& cfg, const MassSystem& ms);

struct CentralConfigResult {
    Configuration cfg;  ///< center of mass at the origin, I = 1
    double value_IU2 = 0.0;
    double lambda = 0.0;
    double residual_norm = 0.0;
    std::size_t restarts_used = 0;
    std::size_t restarts_converged = 0;
};

struct MinimizeIU2Options {
    std::size_t restarts = 32;
    std::uint64_t seed = 1;
    std::size_t max_iterations = 20000;
    double tol_residual = 1e-9;
    unsigned threads = 1;
};

/// Projected Barzilai-Borwein descent on I U^2 with multi-start. With an
/// explicit `init` a single descent runs from it. Throws NonConvergence when
/// no descent reaches tol_residual.
CentralConfigResult minimize_IU2(const MassSystem& ms, const MinimizeIU2Options& opts = {},
                                 const std::optional<Configuration>& init = std::nullopt);

/// Rigid rotation of a central configuration at omega = sqrt(lambda):
/// a_i = q_i, b_i = quarter-turn of q_i, period 2 pi / omega. Needs d = 2.
/// Throws NotCentral when the residual exceeds tol_residual.
EllipticMotionSpec build_relative_equilibrium(const CentralConfigResult& ccr, const MassSystem& ms,
                                              double tol_residual = 1e-9);

/// Homographic Kepler motion q_i(t) = z(t) c_i with z on a Kepler ellipse of
/// eccentricity e, semi-major axis 1 and gravitational parameter lambda;
/// pericenter at t = 0. Samples `samples + 1` states over `periods` periods
/// (both endpoints included).
TrajectorySample build_homographic(const CentralConfigResult& ccr, const MassSystem& ms, double e,
                                   std::size_t samples = 1024, double periods = 1.0,
                                   double tol_residual = 1e-9);

}  // namespace saari
