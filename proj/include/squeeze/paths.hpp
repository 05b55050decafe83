#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "squeeze/errors.hpp"
#include "squeeze/transfer.hpp"

namespace squeeze {

/// Order of the repeated limit when both mu and tau are infinite.
/// Both orders end on the same edge (l = 0, r = 0); the flag exists so
/// callers can state which descent they mean.
enum class LimitOrder { Joint, MuFirst, TauFirst };

/// Squeeze descent l = eps^(mu-1), r = eps^tau. mu in [2, inf],
/// tau in [1, inf]; exponents below these produce no point interactions.
struct SqueezePath {
    double mu = 4.0;
    double tau = 1.0;
    LimitOrder limit_order = LimitOrder::Joint;
};

/// Family from mu: 1 = (3, inf], 2 = {3}, 3 = (2, 3), 4 = {2}.
/// Branch from tau: a = {1}, b = (1, 2), c = {2}, d = (2, inf].
struct PathLabel {
    int family = 1;
    char branch = 'a';

    std::string str() const { return std::to_string(family) + branch; }

    friend bool operator==(const PathLabel&, const PathLabel&) = default;
};

inline PathLabel path_family(double mu, double tau) {
    if (!(mu >= 2.0))
        throw OutOfDomain("mu must lie in [2, inf]");
    if (!(tau >= 1.0))
        throw OutOfDomain("tau must lie in [1, inf]");
    PathLabel label;
    if (mu == 2.0)
        label.family = 4;
    else if (mu < 3.0)
        label.family = 3;
    else if (mu == 3.0)
        label.family = 2;
    else
        label.family = 1;
    if (tau == 1.0)
        label.branch = 'a';
    else if (tau < 2.0)
        label.branch = 'b';
    else if (tau == 2.0)
        label.branch = 'c';
    else
        label.branch = 'd';
    return label;
}

inline std::vector<double> eps_sequence(double start, double factor, int steps) {
    if (!(start > 0.0) || start > 1.0)
        throw std::invalid_argument("eps start must lie in (0, 1]");
    if (!(factor > 0.0) || !(factor < 1.0))
        throw std::invalid_argument("eps factor must lie in (0, 1)");
    if (steps < 2)
        throw std::invalid_argument("eps schedule needs at least 2 steps");
    std::vector<double> seq(static_cast<std::size_t>(steps));
    double v = start;
    for (auto& e : seq) {
        e = v;
        v *= factor;
    }
    return seq;
}

/// Default schedule: 24 steps from 1e-1 by factor 10^(-1/2) reaches
/// eps ~ 1e-13 before double precision gives out at mu <= 4.
inline std::vector<double> default_eps_sequence() {
    return eps_sequence(1e-1, std::pow(10.0, -0.5), 24);
}

inline double width_at(double eps, double mu) {
    return std::isinf(mu) ? 0.0 : std::pow(eps, mu - 1.0);
}

inline double gap_at(double eps, double tau) {
    return std::isinf(tau) ? 0.0 : std::pow(eps, tau);
}

/// Stack matrix at one point of the descent.
inline ChainResult matrix_at_with_error(std::span<const double> a, const SqueezePath& path,
                                        double k, double eps) {
    path_family(path.mu, path.tau); // domain check
    RegularizedSystem sys;
    sys.intensities.assign(a.begin(), a.end());
    sys.eps = eps;
    sys.l = width_at(eps, path.mu);
    sys.r = gap_at(eps, path.tau);
    sys.k = k;
    return stack_matrix_with_error(sys);
}

inline Mat2 matrix_at(std::span<const double> a, const SqueezePath& path, double k, double eps) {
    return matrix_at_with_error(a, path, k, eps).value;
}

/// Exact matrices along a descent, one per eps in `seq` (strictly
/// decreasing), each with its entrywise rounding bound. Overflowing
/// entries saturate to +-inf and are handled by the limit estimator.
struct PathTrace {
    std::vector<double> eps;
    std::vector<Mat2> matrices;
    std::vector<Mat2> noise;
    double k = 1.0;
};

inline PathTrace evaluate_along_path(std::span<const double> a, const SqueezePath& path, double k,
                                     const std::vector<double>& seq) {
    PathTrace trace;
    trace.k = k;
    trace.eps = seq;
    trace.matrices.reserve(seq.size());
    trace.noise.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0 && !(seq[i] < seq[i - 1]))
            throw std::invalid_argument("eps sequence must be strictly decreasing");
        ChainResult res = matrix_at_with_error(a, path, k, seq[i]);
        trace.matrices.push_back(res.value);
        trace.noise.push_back(res.error);
    }
    return trace;
}

} // namespace squeeze
