#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "squeeze/entire.hpp"
#include "squeeze/matrix2.hpp"

namespace squeeze {

/// The stack product always runs in double-double accumulation: m21 ~ 1/eps
/// amplifies rounding in the on-resonance cancellations, and for a 2x2
/// chain of at most five factors the compensation costs nothing. Plain
/// double accumulation misses the 1e-10 determinant budget already at
/// eps ~ 1e-6 in the mu = 2 corner.
inline constexpr double kCompensatedEps = 1e-6; // documented guarantee threshold

/// Finite regularization of an N-delta potential: N rectangular layers of
/// width l and depth -a_j/(eps*l), separated by N-1 gaps of width r, probed
/// at wavenumber k. l == 0 degenerates the layers to ideal delta factors.
struct RegularizedSystem {
    std::vector<double> intensities;
    double eps = 1.0;
    double l = 1.0;
    double r = 1.0;
    double k = 1.0;
};

inline void validate(const RegularizedSystem& sys) {
    if (sys.intensities.empty())
        throw std::invalid_argument("intensities: need at least one delta");
    for (double a : sys.intensities)
        if (a == 0.0 || !std::isfinite(a))
            throw std::invalid_argument("intensity must be nonzero and finite");
    if (!(sys.eps > 0.0))
        throw std::invalid_argument("eps must be positive");
    if (!(sys.k > 0.0))
        throw std::invalid_argument("k must be positive");
    if (sys.l < 0.0 || sys.r < 0.0)
        throw std::invalid_argument("l and r must be nonnegative");
}

/// Free propagation across a gap of width r.
inline Mat2 gap_matrix(double r, double k) {
    double s = std::sin(k * r), c = std::cos(k * r);
    return {c, s / k, -k * s, c};
}

/// One rectangular layer of width l and strength a/(eps*l). With
/// w = k_j^2 l^2 = (k^2 + a/(eps l)) l^2 the entries are entire in w,
/// so barrier (k_j imaginary) and well come out of the same formula.
inline Mat2 layer_matrix(double a, double eps, double l, double k) {
    double w = k * k * l * l + a * (l / eps);
    double c = cfun(w), s = sfun(w);
    return {c, l * s, -(w / l) * s, c};
}

/// Ideal delta of strength a/eps.
inline Mat2 delta_matrix(double a, double eps) { return {1.0, 0.0, -a / eps, 1.0}; }

/// Transfer matrix of the full stack: layer 1 applied first, then
/// alternating gaps and layers (N-1 equal gaps). l == 0 replaces every
/// layer by its ideal-delta factor; r == 0 drops the gaps to identity.
inline ChainResult stack_matrix_with_error(const RegularizedSystem& sys) {
    validate(sys);
    std::vector<Mat2> factors;
    factors.reserve(2 * sys.intensities.size());
    for (std::size_t j = 0; j < sys.intensities.size(); ++j) {
        if (j > 0)
            factors.push_back(gap_matrix(sys.r, sys.k));
        factors.push_back(sys.l == 0.0 ? delta_matrix(sys.intensities[j], sys.eps)
                                       : layer_matrix(sys.intensities[j], sys.eps, sys.l, sys.k));
    }
    return product_chain_with_error(factors, /*compensated=*/true);
}

inline Mat2 stack_matrix(const RegularizedSystem& sys) {
    return stack_matrix_with_error(sys).value;
}

} // namespace squeeze
