#include "saari/bessel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "saari/core.hpp"
#include "saari/numeric.hpp"

namespace saari {

namespace {

double series(int n, double z) {
    // sum_k (-1)^k (z/2)^(n+2k) / (k! (n+k)!)
    const double half = 0.5 * z;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    const double q = half * half;
    CompensatedSum sum;
    sum.add(term);
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum.add(term);
        if (std::abs(term) < 1e-17 * std::abs(sum.value())) break;
    }
    return sum.value();
}

double miller(int n, double z) {
    const int top = std::max(n, static_cast<int>(z)) + 60 + static_cast<int>(12.0 * std::cbrt(z));
    const int start = top + (top % 2);  // even, so the normalization sum closes on J_0
    const double two_over_z = 2.0 / z;
    double next = 0.0;  // J_{k+1}
    double cur = 1e-300;  // J_k
    double wanted = 0.0;
    CompensatedSum norm;
    for (int k = start; k > 0; --k) {
        const double prev = k * two_over_z * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            wanted *= 1e-250;
            norm.sum *= 1e-250;
            norm.carry *= 1e-250;
        }
        if (k - 1 == n) wanted = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm.add(2.0 * cur);
    }
    norm.add(cur);  // J_0
    return wanted / norm.value();
}

}  // namespace

double bessel_J(int n, double z) {
    if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_J(-n, z);
    if (z < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_J(n, -z);
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    if (!std::isfinite(z)) throw InvalidArgument("bessel_J needs a finite argument");
    if (z <= 1.0 || z * z <= static_cast<double>(n + 1)) return series(n, z);
    return miller(n, z);
}

double debye_leading_term(int n, double e) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("Debye form needs 0 < e < 1");
    if (n < 1) throw InvalidArgument("Debye form needs n >= 1");
    const double g = std::acosh(1.0 / e);
    const double th = std::sqrt(1.0 - e * e);  // tanh g
    return std::exp(n * (th - g)) / std::sqrt(2.0 * std::numbers::pi * n * th);
}

}  // namespace saari
