#pragma once

#include <cmath>

#include "squeeze/errors.hpp"

namespace squeeze {

// Entire-function kernels in the variable a = x^2:
//
//   cfun(a) = cos(sqrt(a))            (= cosh(sqrt(-a)) for a < 0)
//   sfun(a) = sin(sqrt(a))/sqrt(a)    (= sinh(sqrt(-a))/sqrt(-a) for a < 0)
//   ufun(a) = tan(sqrt(a))/sqrt(a)    (= sfun/cfun)
//
// Everything downstream (layer matrices, resonance residuals, limit
// matrices) is written in these kernels, so negative intensities (wells
// vs barriers) never leave real arithmetic. Useful identities:
//
//   sqrt(a)*sin(sqrt(a)) = a*sfun(a),   sqrt(a)*tan(sqrt(a)) = a*ufun(a),
//   cfun(a)^2 + a*sfun(a)^2 = 1.

/// Below this |a| the trig/hyperbolic forms lose digits to cancellation;
/// a 6-term Taylor series is exact to well under 1e-16 there.
inline constexpr double kSeriesCut = 1e-4;

/// ufun() refuses arguments where |cfun| falls below this guard: closer to
/// the pole the quotient has no significant digits left.
inline constexpr double kPoleGuard = 1e-8;

inline double cfun(double a) {
    if (std::abs(a) < kSeriesCut) {
        // cos(sqrt(a)) = sum (-a)^n / (2n)!
        double term = 1.0, sum = 1.0;
        for (int n = 1; n <= 6; ++n) {
            term *= -a / ((2 * n - 1) * (2 * n));
            sum += term;
        }
        return sum;
    }
    if (a > 0.0)
        return std::cos(std::sqrt(a));
    return std::cosh(std::sqrt(-a));
}

inline double sfun(double a) {
    if (std::abs(a) < kSeriesCut) {
        // sin(sqrt(a))/sqrt(a) = sum (-a)^n / (2n+1)!
        double term = 1.0, sum = 1.0;
        for (int n = 1; n <= 6; ++n) {
            term *= -a / ((2 * n) * (2 * n + 1));
            sum += term;
        }
        return sum;
    }
    if (a > 0.0) {
        double x = std::sqrt(a);
        return std::sin(x) / x;
    }
    double x = std::sqrt(-a);
    return std::sinh(x) / x;
}

inline double ufun(double a) {
    double c = cfun(a);
    if (std::abs(c) < kPoleGuard)
        throw PoleProximity(a);
    return sfun(a) / c;
}

} // namespace squeeze
