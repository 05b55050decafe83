#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "squeeze/dd.hpp"

namespace squeeze {

/// Real 2x2 transfer matrix connecting (psi, psi') across a structure.
/// Unit determinant (Wronskian conservation) is the defining invariant;
/// det() evaluates m11*m22 - m12*m21 with Kahan's compensated scheme so
/// the cancellation between large products does not eat the result.
struct Mat2 {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

    static Mat2 identity() { return {}; }

    double det() const {
        double w = m12 * m21;
        double e = std::fma(-m12, m21, w);
        double f = std::fma(m11, m22, -w);
        return f + e;
    }

    double max_abs() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }

    std::array<double, 4> elements() const { return {m11, m12, m21, m22}; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
};

namespace detail {

struct Mat2DD {
    DD m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

    static Mat2DD from(const Mat2& m) { return {DD(m.m11), DD(m.m12), DD(m.m21), DD(m.m22)}; }

    Mat2 round() const { return {m11.value(), m12.value(), m21.value(), m22.value()}; }
};

inline DD dot2(DD a, DD b, DD c, DD d) { return dd_add(dd_mul(a, b), dd_mul(c, d)); }

inline Mat2DD mul(const Mat2DD& a, const Mat2DD& b) {
    return {dot2(a.m11, b.m11, a.m12, b.m21), dot2(a.m11, b.m12, a.m12, b.m22),
            dot2(a.m21, b.m11, a.m22, b.m21), dot2(a.m21, b.m12, a.m22, b.m22)};
}

} // namespace detail

namespace detail {

inline Mat2 abs_of(const Mat2& m) {
    return {std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)};
}

} // namespace detail

struct ChainResult {
    Mat2 value;
    /// Entrywise bound on the rounding error of `value`, from the input
    /// entries being doubles plus the accumulation itself. The entries of
    /// on-resonance products cancel from ~1/eps down to O(1), so this
    /// bound is what separates signal from noise in the limit estimator.
    Mat2 error;
    /// Determinant accumulated as the product of the factor determinants.
    /// The determinant re-derived from the rounded entries of `value`
    /// degrades like u*|m|^2 once the entries grow (opaque barriers);
    /// this one stays at ~1e-13 regardless.
    double det = 1.0;
};

/// Product factors[n-1] * ... * factors[0] (factors listed in application
/// order, first-applied first). `compensated` switches the accumulation to
/// double-double; used when eps is small enough that the 1/eps growth of
/// m21 would otherwise contaminate the cancellations.
inline ChainResult product_chain_with_error(const std::vector<Mat2>& factors, bool compensated) {
    if (factors.empty())
        return {Mat2::identity(), {0, 0, 0, 0}, 1.0};
    constexpr double u = 1.1e-16;
    // err_{k} = |F_k| err_{k-1} + c*u*|F_k| absprod_{k-1}; the double path
    // also rounds every multiply, the dd path only inherits input rounding.
    double c = compensated ? 2.0 : 4.0;
    Mat2 absprod = detail::abs_of(factors.front());
    Mat2 err{u * absprod.m11, u * absprod.m12, u * absprod.m21, u * absprod.m22};
    for (std::size_t i = 1; i < factors.size(); ++i) {
        Mat2 fa = detail::abs_of(factors[i]);
        Mat2 grow = fa * absprod;
        err = fa * err;
        err.m11 += c * u * grow.m11;
        err.m12 += c * u * grow.m12;
        err.m21 += c * u * grow.m21;
        err.m22 += c * u * grow.m22;
        absprod = grow;
    }
    Mat2 value;
    if (!compensated) {
        value = factors.front();
        for (std::size_t i = 1; i < factors.size(); ++i)
            value = factors[i] * value;
    } else {
        detail::Mat2DD acc = detail::Mat2DD::from(factors.front());
        for (std::size_t i = 1; i < factors.size(); ++i)
            acc = detail::mul(detail::Mat2DD::from(factors[i]), acc);
        value = acc.round();
    }
    double det = 1.0;
    for (const Mat2& f : factors)
        det *= f.det();
    return {value, err, det};
}

inline Mat2 product_chain(const std::vector<Mat2>& factors, bool compensated) {
    return product_chain_with_error(factors, compensated).value;
}

} // namespace squeeze
