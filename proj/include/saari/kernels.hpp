#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and an AVX2 variant in kernels::avx2; the unqualified
// entry points dispatch at runtime to the best variant the CPU supports.
// Set SAARI_ISA=scalar in the environment to pin the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace saari::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
/// Overrides dispatch for the whole process. Throws InvalidArgument if the
/// CPU lacks the requested instruction set.
void set_isa(Isa isa);

/// RAII override used by the equivalence tests.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_isa(isa); }
    ~ScopedIsa() { set_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

/// A batch of `samples` configurations of the same bodies, laid out
/// sample-fastest: positions[(body * dim + axis) * samples + s].
struct GravityBatch {
    int dim = 2;
    std::size_t bodies = 0;
    std::size_t samples = 0;
    std::span<const double> masses;
    std::span<const double> positions;
    /// Output, length `samples`: U = sum_{i<j} m_i m_j / r_ij.
    std::span<double> potential;
    /// Optional output, same layout as positions: sum_{j!=i} m_j (q_j - q_i) / r^3.
    std::span<double> accel;
    /// Optional output, length `samples`: smallest squared pair distance.
    std::span<double> min_dist2;
};

/// Simultaneous fractional-part scan over k in [k_first, k_last].
struct FracScan {
    /// Each theta already reduced into [0, 1).
    std::span<const double> thetas;
    double eps = 0.0;
    std::uint64_t k_first = 1;
    std::uint64_t k_last = 1;
    /// Stop once this many hits were appended.
    std::size_t max_hits = 0;
};

/// {k * theta} with the product error recovered by a fused multiply-add.
double frac_of_product(std::uint64_t k, double theta);

void gravity(const GravityBatch& batch);
/// Appends hits in increasing order of k.
void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits);

namespace scalar {
void gravity(const GravityBatch& batch);
void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits);
}  // namespace scalar

namespace avx2 {
void gravity(const GravityBatch& batch);
void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits);
}  // namespace avx2

}  // namespace saari::kernels
