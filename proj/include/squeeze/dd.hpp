#pragma once

#include <cmath>

namespace squeeze {

/// Double-double value: the unevaluated sum hi + lo, |lo| <= ulp(hi)/2.
/// Gives ~32 significant digits for the matrix chains whose m21 entry
/// grows like 1/eps while the determinant must stay at 1.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b| or a == 0
inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + (a.lo + b.lo);
    return quick_two_sum(s.hi, lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    double lo = p.lo + (a.hi * b.lo + a.lo * b.hi);
    return quick_two_sum(p.hi, lo);
}

} // namespace squeeze
