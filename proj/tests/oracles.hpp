#pragma once

// Test-side oracles, kept independent of the library code paths they
// check: plain factorial series for the hyperbolic values, a naive
// complex-arithmetic matrix chain in long double for the stack product,
// a brute-force sign scan for roots, and a direct least-squares slope.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline double series_cosh1() {
    double sum = 0.0, term = 1.0;
    for (int n = 0; n < 25; ++n) {
        sum += term;
        term /= (2 * n + 1) * (2 * n + 2);
    }
    return sum;
}

inline double series_sinh1() {
    double sum = 0.0, term = 1.0;
    for (int n = 0; n < 25; ++n) {
        sum += term;
        term /= (2 * n + 2) * (2 * n + 3);
    }
    return sum;
}

inline double series_tanh1() { return series_sinh1() / series_cosh1(); }

using cplxl = std::complex<long double>;

struct NaiveMat {
    cplxl m11{1.0L}, m12{0.0L}, m21{0.0L}, m22{1.0L};
};

inline NaiveMat mul(const NaiveMat& a, const NaiveMat& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

/// Five-factor product evaluated literally: complex layer wavenumbers
/// k_j = sqrt(k^2 + a_j/(eps l)), trig entries, no entire-function
/// reformulation anywhere.
inline std::array<double, 4> naive_stack(const std::vector<double>& a, long double eps,
                                         long double l, long double r, long double k) {
    NaiveMat acc;
    bool first = true;
    NaiveMat gap;
    gap.m11 = std::cos(k * r);
    gap.m12 = std::sin(k * r) / k;
    gap.m21 = -k * std::sin(k * r);
    gap.m22 = std::cos(k * r);
    for (double aj : a) {
        NaiveMat layer;
        if (l == 0.0L) {
            layer.m21 = cplxl(-aj / eps);
        } else {
            cplxl kj = std::sqrt(cplxl(k * k + aj / (eps * l), 0.0L));
            layer.m11 = std::cos(kj * l);
            layer.m12 = std::sin(kj * l) / kj;
            layer.m21 = -kj * std::sin(kj * l);
            layer.m22 = std::cos(kj * l);
        }
        acc = first ? layer : mul(layer, mul(gap, acc));
        first = false;
    }
    return {static_cast<double>(acc.m11.real()), static_cast<double>(acc.m12.real()),
            static_cast<double>(acc.m21.real()), static_cast<double>(acc.m22.real())};
}

/// All sign-change brackets of f on [lo, hi] over `cells` evaluations,
/// refined by plain bisection.
inline std::vector<double> brute_roots(const std::function<double(double)>& f, double lo,
                                       double hi, int cells) {
    std::vector<double> roots;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= cells; ++i) {
        double x1 = lo + (hi - lo) * i / cells;
        double f1 = f(x1);
        if (f0 == 0.0)
            roots.push_back(x0);
        else if (f1 != 0.0 && (f0 < 0) != (f1 < 0)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b), fm = f(m);
                if ((fa < 0) != (fm < 0))
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

/// Least-squares slope of log|y| against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    return sxy / sxx;
}

} // namespace oracle
