#pragma once

namespace saari {

/// Bessel function of the first kind J_n(z) for integer order. Power series
/// where it is free of cancellation, Miller's normalized backward recurrence
/// elsewhere. Intended range |z| <= 1e3, |n| <= 1e3.
double bessel_J(int n, double z);

/// Leading Debye term for J_n(n e), 0 < e < 1:
/// exp(n (tanh g - g)) / sqrt(2 pi n tanh g) with e = 1 / cosh g.
double debye_leading_term(int n, double e);

}  // namespace saari
