#pragma once

// Action functional on zero-mean T-periodic planar loops, the lower bound
// 3 [inf(I U^2) pi^2 / 2]^(1/3) T^(1/3), its equality conditions, and direct
// minimization over truncated Fourier series.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "saari/core.hpp"
#include "saari/elliptic.hpp"

namespace saari {

/// q_i(t) = sum_{n=1..M} alpha_{i,n} cos(n w t) + beta_{i,n} sin(n w t),
/// w = 2 pi / T, in the plane. No constant term, so the time mean is zero.
class FourierLoop {
public:
    FourierLoop() = default;
    FourierLoop(std::size_t bodies, std::size_t harmonics, double period);

    std::size_t bodies() const { return bodies_; }
    std::size_t harmonics() const { return harmonics_; }
    double period() const { return period_; }
    double omega() const;

    /// Flat index of coefficient (body, harmonic n >= 1, sin? , axis).
    std::size_t index(std::size_t body, std::size_t n, bool sine, int axis) const {
        return (((body * harmonics_ + (n - 1)) * 2 + (sine ? 1 : 0)) * 2) + static_cast<std::size_t>(axis);
    }
    double& coeff(std::size_t body, std::size_t n, bool sine, int axis) { return coeffs_[index(body, n, sine, axis)]; }
    double coeff(std::size_t body, std::size_t n, bool sine, int axis) const {
        return coeffs_[index(body, n, sine, axis)];
    }
    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    Configuration position(double t) const;
    Configuration velocity(double t) const;

private:
    std::size_t bodies_ = 0;
    std::size_t harmonics_ = 0;
    double period_ = 1.0;
    std::vector<double> coeffs_;
};

/// Default quadrature size for the potential term: 16 M, at least 64.
std::size_t default_samples(const FourierLoop& loop);

/// Integral of K + U over one period: kinetic part exact from the
/// coefficients, potential by periodic trapezoid. Throws CollisionOnGrid.
double action(const FourierLoop& loop, const MassSystem& ms, std::size_t samples = 0);
double kinetic_integral(const FourierLoop& loop, const MassSystem& ms);
double potential_integral(const FourierLoop& loop, const MassSystem& ms, std::size_t samples = 0);

/// Gradient of `action` with respect to the flat coefficient vector.
std::vector<double> action_gradient(const FourierLoop& loop, const MassSystem& ms, std::size_t samples = 0);

/// Integral of K minus (2 pi / T)^2 times the integral of I / 2; zero exactly
/// for first-harmonic loops.
double wirtinger_defect(const FourierLoop& loop, const MassSystem& ms);

/// 3 [inf_IU2 pi^2 / 2]^(1/3) T^(1/3).
double lower_bound(double T, double inf_IU2);

struct EqualityFlag {
    bool set = false;
    double defect = 0.0;
};

struct BoundReport {
    double action_value = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;
    double relative_gap = 0.0;
    double inf_IU2_used = 0.0;
    EqualityFlag first_harmonic_only;  ///< (i)
    EqualityFlag balanced;             ///< (ii) (2 pi / T)^2 I = U along the loop
    EqualityFlag minimizes_IU2;        ///< (iii)
    double center_of_mass_drift = 0.0; ///< max |sum m q| / M, reported only
};

/// Evaluates the three equality conditions with relative tolerance `tol`.
BoundReport equality_conditions(const FourierLoop& loop, const MassSystem& ms, double inf_IU2, double tol = 1e-6,
                                std::size_t samples = 0);

/// Rigid rotation of a central configuration with period T, written as a
/// first-harmonic loop with M harmonics (higher ones zero).
FourierLoop relative_equilibrium_loop(const Configuration& cfg, const MassSystem& ms, double T,
                                      std::size_t harmonics);

/// First-harmonic part of the loop as an elliptic motion with uniform
/// angle law of period T.
EllipticMotionSpec to_elliptic_spec(const FourierLoop& loop);

struct MinimizeActionOptions {
    std::size_t restarts = 16;
    std::uint64_t seed = 1;
    std::size_t max_iterations = 4000;
    std::size_t memory = 10;
    double grad_tol = 1e-10;  ///< on |g| * scale / |A|
    double rel_tol = 1e-4;    ///< success threshold for gap / bound
    double collision_floor = 1e-4;
    double flag_tol = 1e-6;
    std::size_t samples = 0;
    unsigned threads = 1;
};

struct ActionMinimum {
    FourierLoop loop;
    BoundReport report;
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    std::size_t restarts_converged = 0;
    std::size_t restarts_stalled = 0;
    bool success = false;  ///< relative gap below rel_tol
};

/// L-BFGS descent over the coefficients with seeded multi-start, or a
/// single descent from `init`. Throws CollisionStall when every restart
/// runs into the collision floor and NonConvergence when none converges.
ActionMinimum minimize_action(const MassSystem& ms, double T, std::size_t harmonics, double inf_IU2,
                              const MinimizeActionOptions& opts = {},
                              const std::optional<FourierLoop>& init = std::nullopt);

}  // namespace saari
