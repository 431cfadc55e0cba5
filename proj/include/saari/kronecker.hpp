#pragma once

// Integers k for which every {k theta_i} is simultaneously close to an
// integer, and the harmonic-index search built on top of it.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "saari/core.hpp"

namespace saari {

/// No witness within the scanned range; carries the best attempt.
class NotFound : public Error {
public:
    NotFound(const std::string& what, std::uint64_t best_n, double best_phi)
        : Error(what), best_n(best_n), best_phi(best_phi) {}
    std::uint64_t best_n;
    double best_phi;
};

/// t - floor(t), always in [0, 1).
double fractional_part(double t);

enum class HitSide { NearZero, NearOne };

struct SimultaneousHit {
    std::uint64_t k = 0;
    std::vector<double> fracs;
    std::vector<HitSide> side;
};

struct HitSearch {
    std::vector<SimultaneousHit> hits;
    std::uint64_t k_first = 1;
    /// Last k examined: the last hit when `count` was reached, else k_max.
    std::uint64_t k_last = 0;
};

/// First `count` integers 1 <= k <= k_max with {k theta_i} < eps or
/// > 1 - eps for every i, in increasing order. 0 < eps < 0.5. The result is
/// independent of `threads`.
HitSearch simultaneous_hits(const std::vector<double>& thetas, double eps, std::uint64_t k_max,
                            std::size_t count = 1, unsigned threads = 1);

struct PhaseWitness {
    std::uint64_t n = 0;
    double phi = 0.0;  ///< n phase / 2 pi minus the nearest integer
};

/// Smallest n <= n_max with |phi| < window, 0 < window <= 0.25; then
/// cos(n phase) > 0. Throws NotFound.
PhaseWitness phase_witness(double phase, double window, std::uint64_t n_max);

struct MultiPhaseWitness {
    std::uint64_t n = 0;
    std::vector<double> phi;
};

/// Smallest n = stride * k <= n_max for which every phase satisfies the
/// window condition at once. Throws NotFound.
MultiPhaseWitness phase_witness(const std::vector<double>& phases, double window, std::uint64_t n_max,
                                std::uint64_t stride = 1);

}  // namespace saari
