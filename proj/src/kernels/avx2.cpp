// AVX2 + FMA variants. This translation unit is built with -mavx2 -mfma
// -ffp-contract=off; lanes run the same operation sequence as the scalar
// reference so both paths produce identical bits.

#include <algorithm>
#include <cmath>
#include <limits>

#include "saari/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define SAARI_HAVE_AVX2 1
#endif

namespace saari::kernels::avx2 {

#ifdef SAARI_HAVE_AVX2

namespace {

inline void pair_tail(const GravityBatch& b, std::size_t i, std::size_t j, std::size_t s, bool want_acc,
                        bool want_min) {
    const std::size_t S = b.samples;
    const int dim = b.dim;
    const double* pos = b.positions.data();
    double d[3] = {0.0, 0.0, 0.0};
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        d[a] = pos[(j * dim + a) * S + s] - pos[(i * dim + a) * S + s];
        r2 += d[a] * d[a];
    }
    const double inv = 1.0 / std::sqrt(r2);
    const double inv3 = inv * inv * inv;
    b.potential[s] += b.masses[i] * b.masses[j] * inv;
    if (want_acc) {
        for (int a = 0; a < dim; ++a) {
            const double f = d[a] * inv3;
            b.accel[(i * dim + a) * S + s] += b.masses[j] * f;
            b.accel[(j * dim + a) * S + s] -= b.masses[i] * f;
        }
    }
    if (want_min) b.min_dist2[s] = std::min(b.min_dist2[s], r2);
}

}  // namespace

void gravity(const GravityBatch& b) {
    const std::size_t S = b.samples;
    const int dim = b.dim;
    const bool want_acc = !b.accel.empty();
    const bool want_min = !b.min_dist2.empty();

    std::fill(b.potential.begin(), b.potential.begin() + S, 0.0);
    if (want_acc) std::fill(b.accel.begin(), b.accel.end(), 0.0);
    if (want_min) std::fill(b.min_dist2.begin(), b.min_dist2.end(), std::numeric_limits<double>::infinity());

    const double* pos = b.positions.data();
    const std::size_t S4 = S - S % 4;
    const __m256d one = _mm256_set1_pd(1.0);

    for (std::size_t i = 0; i < b.bodies; ++i) {
        for (std::size_t j = i + 1; j < b.bodies; ++j) {
            const __m256d vmi = _mm256_set1_pd(b.masses[i]);
            const __m256d vmj = _mm256_set1_pd(b.masses[j]);
            const __m256d vmij = _mm256_set1_pd(b.masses[i] * b.masses[j]);
            for (std::size_t s = 0; s < S4; s += 4) {
                __m256d d[3];
                __m256d r2 = _mm256_setzero_pd();
                for (int a = 0; a < dim; ++a) {
                    const __m256d xj = _mm256_loadu_pd(pos + (j * dim + a) * S + s);
                    const __m256d xi = _mm256_loadu_pd(pos + (i * dim + a) * S + s);
                    d[a] = _mm256_sub_pd(xj, xi);
                    r2 = _mm256_add_pd(r2, _mm256_mul_pd(d[a], d[a]));
                }
                const __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(r2));
                const __m256d inv3 = _mm256_mul_pd(_mm256_mul_pd(inv, inv), inv);
                double* pot = b.potential.data() + s;
                _mm256_storeu_pd(pot, _mm256_add_pd(_mm256_loadu_pd(pot), _mm256_mul_pd(vmij, inv)));
                if (want_acc) {
                    for (int a = 0; a < dim; ++a) {
                        const __m256d f = _mm256_mul_pd(d[a], inv3);
                        double* ai = b.accel.data() + (i * dim + a) * S + s;
                        double* aj = b.accel.data() + (j * dim + a) * S + s;
                        _mm256_storeu_pd(ai, _mm256_add_pd(_mm256_loadu_pd(ai), _mm256_mul_pd(vmj, f)));
                        _mm256_storeu_pd(aj, _mm256_sub_pd(_mm256_loadu_pd(aj), _mm256_mul_pd(vmi, f)));
                    }
                }
                if (want_min) {
                    double* mn = b.min_dist2.data() + s;
                    // min(b, a) keeps the scalar std::min(a, b) tie behaviour.
                    _mm256_storeu_pd(mn, _mm256_min_pd(r2, _mm256_loadu_pd(mn)));
                }
            }
            for (std::size_t s = S4; s < S; ++s) pair_tail(b, i, j, s, want_acc, want_min);
        }
    }
}

void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits) {
    std::size_t found = 0;
    const __m256d lo = _mm256_set1_pd(scan.eps);
    const __m256d hi = _mm256_set1_pd(1.0 - scan.eps);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d lane_offsets = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

    std::uint64_t k = scan.k_first;
    while (found < scan.max_hits && k <= scan.k_last && scan.k_last - k >= 3) {
        const double kd = static_cast<double>(k);
        const __m256d kv = _mm256_add_pd(_mm256_set1_pd(kd), lane_offsets);
        __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (double theta : scan.thetas) {
            const __m256d th = _mm256_set1_pd(theta);
            const __m256d p = _mm256_mul_pd(kv, th);
            const __m256d err = _mm256_fmsub_pd(kv, th, p);
            __m256d f = _mm256_add_pd(_mm256_sub_pd(p, _mm256_floor_pd(p)), err);
            f = _mm256_add_pd(f, _mm256_and_pd(_mm256_cmp_pd(f, zero, _CMP_LT_OQ), one));
            f = _mm256_sub_pd(f, _mm256_and_pd(_mm256_cmp_pd(f, one, _CMP_GE_OQ), one));
            const __m256d ok = _mm256_or_pd(_mm256_cmp_pd(f, lo, _CMP_LT_OQ), _mm256_cmp_pd(f, hi, _CMP_GT_OQ));
            mask = _mm256_and_pd(mask, ok);
            if (_mm256_movemask_pd(mask) == 0) break;
        }
        const int bits = _mm256_movemask_pd(mask);
        for (int lane = 0; lane < 4 && found < scan.max_hits; ++lane) {
            if (bits & (1 << lane)) {
                hits.push_back(k + static_cast<std::uint64_t>(lane));
                ++found;
            }
        }
        k += 4;
    }
    if (found < scan.max_hits && k <= scan.k_last) {
        FracScan rest = scan;
        rest.k_first = k;
        rest.max_hits = scan.max_hits - found;
        scalar::frac_scan(rest, hits);
    }
}

#else

void gravity(const GravityBatch& b) { scalar::gravity(b); }
void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits) { scalar::frac_scan(scan, hits); }

#endif

}  // namespace saari::kernels::avx2
