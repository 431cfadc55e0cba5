#include <algorithm>
#include <cmath>
#include <limits>

#include "saari/kernels.hpp"

namespace saari::kernels {

double frac_of_product(std::uint64_t k, double theta) {
    const double kd = static_cast<double>(k);
    const double p = kd * theta;
    const double err = std::fma(kd, theta, -p);
    double f = (p - std::floor(p)) + err;
    if (f < 0.0) f += 1.0;
    if (f >= 1.0) f -= 1.0;
    return f;
}

namespace scalar {

void gravity(const GravityBatch& b) {
    const std::size_t S = b.samples;
    const int dim = b.dim;
    const bool want_acc = !b.accel.empty();
    const bool want_min = !b.min_dist2.empty();

    std::fill(b.potential.begin(), b.potential.begin() + S, 0.0);
    if (want_acc) std::fill(b.accel.begin(), b.accel.end(), 0.0);
    if (want_min) std::fill(b.min_dist2.begin(), b.min_dist2.end(), std::numeric_limits<double>::infinity());

    const double* pos = b.positions.data();
    for (std::size_t i = 0; i < b.bodies; ++i) {
        for (std::size_t j = i + 1; j < b.bodies; ++j) {
            const double mi = b.masses[i];
            const double mj = b.masses[j];
            const double mij = mi * mj;
            for (std::size_t s = 0; s < S; ++s) {
                double d[3] = {0.0, 0.0, 0.0};
                double r2 = 0.0;
                for (int a = 0; a < dim; ++a) {
                    d[a] = pos[(j * dim + a) * S + s] - pos[(i * dim + a) * S + s];
                    r2 += d[a] * d[a];
                }
                const double inv = 1.0 / std::sqrt(r2);
                const double inv3 = inv * inv * inv;
                b.potential[s] += mij * inv;
                if (want_acc) {
                    for (int a = 0; a < dim; ++a) {
                        const double f = d[a] * inv3;
                        b.accel[(i * dim + a) * S + s] += mj * f;
                        b.accel[(j * dim + a) * S + s] -= mi * f;
                    }
                }
                if (want_min) b.min_dist2[s] = std::min(b.min_dist2[s], r2);
            }
        }
    }
}

void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits) {
    std::size_t found = 0;
    const double lo = scan.eps;
    const double hi = 1.0 - scan.eps;
    for (std::uint64_t k = scan.k_first; k <= scan.k_last && found < scan.max_hits; ++k) {
        bool all = true;
        for (double theta : scan.thetas) {
            const double f = frac_of_product(k, theta);
            if (!(f < lo || f > hi)) {
                all = false;
                break;
            }
        }
        if (all) {
            hits.push_back(k);
            ++found;
        }
        if (k == scan.k_last) break;
    }
}

}  // namespace scalar
}  // namespace saari::kernels
