#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "squeeze/paths.hpp"

namespace squeeze {

struct PowerFit {
    double slope = 0.0;
    double r2 = 0.0;
    int points = 0;
};

/// Least-squares slope of log|y| against log(eps), skipping zeros and
/// non-finite samples. slope < 0 means divergence, slope > 0 decay.
inline PowerFit power_law_fit(const std::vector<double>& eps, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size() && i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || y[i] == 0.0)
            continue;
        lx.push_back(std::log(eps[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    PowerFit fit;
    fit.points = static_cast<int>(lx.size());
    if (fit.points < 3)
        return fit;
    double n = static_cast<double>(fit.points);
    double mx = 0, my = 0;
    for (int i = 0; i < fit.points; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < fit.points; ++i) {
        double dx = lx[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        return fit;
    fit.slope = sxy / sxx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

/// Per-element verdict of a descent trace. A clean geometric contraction
/// yields an extrapolated Value; a clean power law in eps yields PowerLaw
/// with the fitted exponent (element ~ eps^exponent, so exponent < 0 is a
/// divergence); anything else is Inconclusive.
struct ElementEstimate {
    enum class Kind { Value, PowerLaw, Inconclusive } kind = Kind::Inconclusive;
    double value = 0.0;
    double uncertainty = 0.0;
    double exponent = 0.0;
    double r2 = 0.0;

    bool converged() const { return kind == Kind::Value; }
};

struct LimitEstimate {
    ElementEstimate m11, m12, m21, m22;

    const ElementEstimate& element(int i) const {
        switch (i) {
        case 0: return m11;
        case 1: return m12;
        case 2: return m21;
        default: return m22;
        }
    }
};

/// Exponent fits only count when the regression is this clean.
inline constexpr double kFitR2Min = 0.999;

namespace detail {

inline ElementEstimate estimate_element(const std::vector<double>& eps,
                                        const std::vector<double>& y,
                                        const std::vector<double>& noise, double factor) {
    ElementEstimate est;
    auto noise_at = [&](std::size_t i) { return noise.empty() ? 0.0 : noise[i]; };

    // Saturated (overflowed) tails cut the usable prefix.
    std::size_t n = 0;
    while (n < y.size() && std::isfinite(y[n]))
        ++n;

    // On-resonance cancellations leave pure rounding noise once the true
    // value sinks below the accumulated error bound; drop that tail.
    while (n > 0 && std::abs(y[n - 1]) <= 8.0 * noise_at(n - 1))
        --n;

    if (n == 0) {
        // Never above the noise floor: zero within resolution.
        est.kind = ElementEstimate::Kind::Value;
        est.value = 0.0;
        est.uncertainty = noise.empty() ? 0.0 : 8.0 * noise.back();
        return est;
    }
    if (n < 4) {
        if (!noise.empty() && std::abs(y[n - 1]) <= 64.0 * noise_at(n - 1)) {
            // A couple of barely-resolved points: compatible with zero.
            est.kind = ElementEstimate::Kind::Value;
            est.value = 0.0;
            est.uncertainty = std::abs(y[n - 1]) + 8.0 * noise_at(n - 1);
            return est;
        }
        // Overflowed almost immediately: fit whatever finite prefix exists.
        std::vector<double> ep(eps.begin(), eps.begin() + static_cast<long>(n));
        std::vector<double> yp(y.begin(), y.begin() + static_cast<long>(n));
        PowerFit fit = power_law_fit(ep, yp);
        if (fit.points >= 3 && fit.r2 > kFitR2Min) {
            est.kind = ElementEstimate::Kind::PowerLaw;
            est.exponent = fit.slope;
            est.r2 = fit.r2;
        }
        return est;
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(y[i]));
    if (scale == 0.0) {
        est.kind = ElementEstimate::Kind::Value;
        return est;
    }
    double base_floor = 1e-13 * std::max(1.0, scale);

    // Differences below the local noise carry no information; keep only
    // the resolved prefix of deltas and extrapolate from its end.
    std::vector<double> d(n - 1);
    std::vector<double> dn(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = y[i + 1] - y[i];
        dn[i] = 4.0 * (noise_at(i) + noise_at(i + 1)) + base_floor;
    }
    std::size_t m = d.size();
    while (m > 0 && std::abs(d[m - 1]) <= dn[m - 1])
        --m;

    if (m == 0) {
        // Plateau at the trace resolution.
        est.kind = ElementEstimate::Kind::Value;
        est.value = y[n - 1];
        est.uncertainty = dn.back();
        return est;
    }
    double tail_floor = dn[m - 1];
    if (m == 1) {
        est.kind = ElementEstimate::Kind::Value;
        est.value = y[m];
        est.uncertainty = std::abs(d[0]) + tail_floor;
        return est;
    }

    // Contraction test on the trailing resolved deltas: each must shrink
    // by at least factor^(1/2) (small slack for rounding).
    double required = std::pow(factor, 0.5) * 1.02;
    std::size_t pairs = std::min<std::size_t>(4, m - 1);
    bool contracting = true;
    for (std::size_t i = m - 1 - pairs; i + 1 < m; ++i) {
        if (std::abs(d[i + 1]) <= dn[i + 1])
            continue;
        if (!(std::abs(d[i + 1]) <= required * std::abs(d[i]))) {
            contracting = false;
            break;
        }
    }

    if (contracting) {
        // Aitken delta-squared on the last three resolved points.
        double d1 = d[m - 2], d2 = d[m - 1];
        double denom = d2 - d1;
        double corr = denom == 0.0 ? 0.0 : -d2 * d2 / denom;
        est.kind = ElementEstimate::Kind::Value;
        est.value = y[m] + corr;
        est.uncertainty = std::abs(corr) + tail_floor;
        return est;
    }

    std::vector<double> ep(eps.begin(), eps.begin() + static_cast<long>(m + 1));
    std::vector<double> yp(y.begin(), y.begin() + static_cast<long>(m + 1));
    PowerFit fit = power_law_fit(ep, yp);
    if (fit.points >= 3 && fit.r2 > kFitR2Min) {
        est.kind = ElementEstimate::Kind::PowerLaw;
        est.exponent = fit.slope;
        est.r2 = fit.r2;
        return est;
    }
    est.kind = ElementEstimate::Kind::Inconclusive;
    est.r2 = fit.r2;
    return est;
}

} // namespace detail

inline LimitEstimate estimate_limit(const PathTrace& trace) {
    if (trace.eps.size() < 4)
        throw std::invalid_argument("estimate_limit needs at least 4 trace points");
    double factor = trace.eps[1] / trace.eps[0];
    std::vector<double> column(trace.eps.size());
    std::vector<double> noise_col;
    if (!trace.noise.empty())
        noise_col.resize(trace.eps.size());
    LimitEstimate out;
    ElementEstimate* slots[4] = {&out.m11, &out.m12, &out.m21, &out.m22};
    for (int e = 0; e < 4; ++e) {
        for (std::size_t i = 0; i < trace.matrices.size(); ++i) {
            column[i] = trace.matrices[i].elements()[static_cast<std::size_t>(e)];
            if (!noise_col.empty())
                noise_col[i] = trace.noise[i].elements()[static_cast<std::size_t>(e)];
        }
        *slots[e] = detail::estimate_element(trace.eps, column, noise_col, factor);
    }
    return out;
}

} // namespace squeeze
