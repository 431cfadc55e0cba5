#pragma once

#include <cstddef>

#include "saari/core.hpp"

namespace saari {

struct EnergyBreakdown {
    double kinetic = 0.0;
    double potential = 0.0;   ///< force function U (positive)
    double lagrangian = 0.0;  ///< K + U
    double total = 0.0;       ///< K - U
};

/// U = sum_{i<j} m_i m_j / |q_i - q_j|. Throws CollisionError on a zero distance.
double force_function(const Configuration& cfg, const MassSystem& ms);

/// I = sum_j m_j |q_j|^2 about the origin.
double moment_of_inertia(const Configuration& cfg, const MassSystem& ms);

/// Accelerations q''_k = sum_{j != k} m_j (q_j - q_k) / |q_j - q_k|^3, i.e.
/// m_k q''_k = dU/dq_k.
Configuration newton_rhs(const Configuration& cfg, const MassSystem& ms);

EnergyBreakdown energies(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms);

/// Scalar angular momentum sum_i m_i (x_i v_y,i - y_i v_x,i); planar only.
double angular_momentum(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms);

enum class Integrator {
    Verlet,    ///< velocity Verlet (Stormer), second order
    Yoshida4,  ///< fourth-order symmetric composition of Verlet steps
};

struct IntegrateOptions {
    double dt = 1e-3;
    std::size_t steps = 1000;
    /// Keep every n-th state; the final state is always kept.
    std::size_t record_every = 1;
    /// Abort with CollisionApproach when a pair gets closer than this
    /// fraction of the initial minimal distance.
    double collision_floor = 1e-8;
    Integrator scheme = Integrator::Yoshida4;
};

/// Fixed-step symplectic propagation. Bit-for-bit reproducible for fixed
/// (dt, steps, scheme).
TrajectorySample integrate(const Configuration& cfg, const Configuration& velocities, const MassSystem& ms,
                           const IntegrateOptions& opts);

struct MonitorReport {
    double defect_I = 0.0;
    double defect_U = 0.0;
    bool saari_candidate = false;
    /// False when I looks constant but U does not, which cannot happen on an
    /// exact solution (I'' = 4E + 2U).
    bool jacobi_consistent = true;
};

/// Constancy of I(t) and U(t) along a sampled trajectory.
MonitorReport saari_monitor(const TrajectorySample& traj, const MassSystem& ms, const Tolerances& tol = {});

}  // namespace saari
