#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "squeeze/classify.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/matrix2.hpp"
#include "squeeze/paths.hpp"

namespace squeeze {

/// Plane-wave amplitudes and probabilities for incidence from the left.
/// The only complex arithmetic in the library lives here.
struct ScatteringResult {
    std::complex<double> t{0.0, 0.0};
    std::complex<double> r{0.0, 0.0};
    double T = 0.0;
    double R = 0.0;
};

/// Solve the boundary relation (psi, psi') |_+0 = M (psi, psi') |_-0 with
/// psi = e^{ikx} + r e^{-ikx} on the left and t e^{ikx} on the right:
///   t = 2ik / (ik (m11 + m22) - m21 + k^2 m12).
inline ScatteringResult scatter(const Mat2& m, double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("scatter: k must be positive");
    double d = m.det();
    // entry rounding alone moves the determinant by ~u*|m|^2; the guard
    // scales with the products so large opaque stacks are not rejected
    double det_scale = std::max(1.0, std::abs(m.m11 * m.m22) + std::abs(m.m12 * m.m21));
    if (std::abs(d - 1.0) > 1e-8 * det_scale)
        throw NonUnimodular("scatter: determinant " + std::to_string(d) +
                            " is not 1 within 1e-8");
    std::complex<double> ik(0.0, k);
    std::complex<double> den = ik * (m.m11 + m.m22) - m.m21 + k * k * m.m12;
    ScatteringResult res;
    res.t = 2.0 * ik / den;
    res.r = (ik * (m.m22 - m.m11) + k * k * m.m12 + m.m21) / den;
    res.T = std::norm(res.t);
    res.R = std::norm(res.r);
    return res;
}

/// Scattering off a classified limit interaction. The separated
/// (Dirichlet) point has no transfer matrix: full reflection with
/// r = -1 (psi(0) = 0). NotConverged inputs are rejected.
inline ScatteringResult scatter_limit(const LimitInteraction& li, double k) {
    if (li.kind == InteractionKind::NotConverged)
        throw std::invalid_argument("scatter_limit: NotConverged carries no limit matrix");
    if (!(k > 0.0))
        throw std::invalid_argument("scatter_limit: k must be positive");
    if (li.kind == InteractionKind::SeparatedDirichlet) {
        ScatteringResult res;
        res.t = 0.0;
        res.r = -1.0;
        res.T = 0.0;
        res.R = 1.0;
        return res;
    }
    return scatter(li.matrix(), k);
}

struct SweepRow {
    double k = 0.0;
    double T = 0.0;
    double R = 0.0;
};

inline std::vector<double> k_grid(double k_lo, double k_hi, int samples) {
    if (samples < 1 || !(k_lo > 0.0) || !(k_hi >= k_lo))
        throw std::invalid_argument("transmission sweep needs 0 < k_lo <= k_hi, samples >= 1");
    std::vector<double> ks(static_cast<std::size_t>(samples));
    if (samples == 1) {
        ks[0] = k_lo;
        return ks;
    }
    double step = (k_hi - k_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i)
        ks[static_cast<std::size_t>(i)] = k_lo + i * step;
    return ks;
}

/// T(k), R(k) across the finite regularized stack; the matrix is rebuilt
/// at every k (the layer wavenumbers depend on it).
inline std::vector<SweepRow> transmission_sweep(std::span<const double> a,
                                                const SqueezePath& path, double eps, double k_lo,
                                                double k_hi, int samples) {
    std::vector<SweepRow> rows;
    for (double k : k_grid(k_lo, k_hi, samples)) {
        ScatteringResult s = scatter(matrix_at(a, path, k, eps), k);
        rows.push_back({k, s.T, s.R});
    }
    return rows;
}

/// T(k), R(k) of a limit interaction.
inline std::vector<SweepRow> transmission_sweep(const LimitInteraction& li, double k_lo,
                                                double k_hi, int samples) {
    std::vector<SweepRow> rows;
    for (double k : k_grid(k_lo, k_hi, samples)) {
        ScatteringResult s = scatter_limit(li, k);
        rows.push_back({k, s.T, s.R});
    }
    return rows;
}

} // namespace squeeze
