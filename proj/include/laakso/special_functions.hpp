#pragma once

#include <complex>

namespace laakso {

using Complex = std::complex<double>;

/**
 * Riemann zeta on the complex plane via the alternating (eta) series with
 * Borwein's acceleration, zeta(s) = eta(s) / (1 - 2^{1-s}). Near the zeros of
 * 1 - 2^{1-s} it switches to Euler-Maclaurin. Throws PoleError at s = 1.
 */
Complex riemann_zeta(Complex s);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} by Euler-Maclaurin, a > 0, s != 1.
Complex hurwitz_zeta(Complex s, double a);

/// Gamma function (Lanczos, g = 7) with reflection for Re z < 1/2.
/// Throws PoleError at non-positive integers. Call it qualified: glibc's
/// ::gamma(double) is log-gamma and wins overload resolution for real arguments.
Complex gamma(Complex z);

/// log Gamma for Re z >= 1/2, continuous in Im z.
Complex log_gamma(Complex z);

}  // namespace laakso
