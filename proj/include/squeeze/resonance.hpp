#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "squeeze/entire.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/util.hpp"

namespace squeeze {

// Resonance sets of intensity vectors on which the divergences of the
// squeezed transfer matrix cancel. K and L are algebraic (single
// resonance); F and G are transcendental (countable families). P and Q
// are the point subsets sin(sqrt(a_j)) = 0 resp. cos(sqrt(a_j)) = 0; the
// Q3 superscript marks which slot carries the sin condition instead.
enum class SetId { K2, K3, L2, L3, F2, F3, G2, G3, P2, P3, Q2, Q3_1, Q3_2, Q3_3 };

inline int set_arity(SetId id) {
    switch (id) {
    case SetId::K2: case SetId::L2: case SetId::F2: case SetId::G2:
    case SetId::P2: case SetId::Q2:
        return 2;
    default:
        return 3;
    }
}

inline std::string set_name(SetId id) {
    switch (id) {
    case SetId::K2: return "K2";
    case SetId::K3: return "K3";
    case SetId::L2: return "L2";
    case SetId::L3: return "L3";
    case SetId::F2: return "F2";
    case SetId::F3: return "F3";
    case SetId::G2: return "G2";
    case SetId::G3: return "G3";
    case SetId::P2: return "P2";
    case SetId::P3: return "P3";
    case SetId::Q2: return "Q2";
    case SetId::Q3_1: return "Q3_1";
    case SetId::Q3_2: return "Q3_2";
    default: return "Q3_3";
    }
}

/// Sets with an equation usable by solve_last / trace_curve / slice_surface.
inline bool set_is_solvable(SetId id) {
    switch (id) {
    case SetId::K2: case SetId::K3: case SetId::L2: case SetId::L3:
    case SetId::F2: case SetId::F3: case SetId::G2: case SetId::G3:
        return true;
    default:
        return false;
    }
}

namespace detail {

inline void check_arity(SetId id, std::span<const double> a, const char* what) {
    if (static_cast<int>(a.size()) != set_arity(id))
        throw ArityMismatch(std::string(what) + ": " + set_name(id) + " expects " +
                            std::to_string(set_arity(id)) + " intensities, got " +
                            std::to_string(a.size()));
}

// |sin(sqrt(a))| for a > 0; anything >= 1 otherwise (the P condition
// needs a = (n pi)^2 > 0).
inline double sin_gate(double a) {
    if (a <= 0.0)
        return 1.0 + std::abs(a);
    return std::abs(sfun(a)) * std::sqrt(a);
}

// |cos(sqrt(a))|; cosh >= 1 for a < 0 rules negatives out automatically.
inline double cos_gate(double a) { return std::abs(cfun(a)); }

} // namespace detail

/// Cleared (entire) residual: the defining equation multiplied through by
/// the cosine factors, written in cfun/sfun so the tan poles disappear.
/// Zero iff the point lies on the set (closure for F/G at the pole lines).
inline double residual(SetId id, std::span<const double> a) {
    detail::check_arity(id, a, "residual");
    switch (id) {
    case SetId::K2:
        return a[0] + a[1] - a[0] * a[1];
    case SetId::K3:
        return a[0] + a[1] + a[2] - a[0] * a[1] - 2.0 * a[0] * a[2] - a[1] * a[2] +
               a[0] * a[1] * a[2];
    case SetId::L2:
        return a[0] + a[1];
    case SetId::L3:
        return a[0] + a[1] + a[2];
    case SetId::F2: {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return a[0] * s1 * c2 + a[1] * c1 * s2 - a[0] * a[1] * s1 * s2;
    }
    case SetId::G2: {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return a[0] * s1 * c2 + a[1] * c1 * s2;
    }
    case SetId::G3: {
        double c1 = cfun(a[0]), s1 = sfun(a[0]);
        double c2 = cfun(a[1]), s2 = sfun(a[1]);
        double c3 = cfun(a[2]), s3 = sfun(a[2]);
        return a[0] * s1 * c2 * c3 + a[1] * c1 * s2 * c3 + a[2] * c1 * c2 * s3 -
               a[0] * a[2] * s1 * s2 * s3;
    }
    case SetId::F3: {
        double c1 = cfun(a[0]), s1 = sfun(a[0]);
        double c2 = cfun(a[1]), s2 = sfun(a[1]);
        double c3 = cfun(a[2]), s3 = sfun(a[2]);
        double g3 = a[0] * s1 * c2 * c3 + a[1] * c1 * s2 * c3 + a[2] * c1 * c2 * s3 -
                    a[0] * a[2] * s1 * s2 * s3;
        return g3 - a[0] * a[1] * s1 * s2 * c3 - 2.0 * a[0] * a[2] * s1 * c2 * s3 -
               a[1] * a[2] * c1 * s2 * s3 + a[0] * a[1] * a[2] * s1 * s2 * s3;
    }
    case SetId::P2:
        return std::max(detail::sin_gate(a[0]), detail::sin_gate(a[1]));
    case SetId::P3:
        return std::max({detail::sin_gate(a[0]), detail::sin_gate(a[1]),
                         detail::sin_gate(a[2])});
    case SetId::Q2:
        return std::max(detail::cos_gate(a[0]), detail::cos_gate(a[1]));
    case SetId::Q3_3:
        return std::max({detail::cos_gate(a[0]), detail::cos_gate(a[1]),
                         detail::sin_gate(a[2])});
    case SetId::Q3_2:
        return std::max({detail::cos_gate(a[0]), detail::sin_gate(a[1]),
                         detail::cos_gate(a[2])});
    default: // Q3_1
        return std::max({detail::sin_gate(a[0]), detail::cos_gate(a[1]),
                         detail::cos_gate(a[2])});
    }
}

/// Literal sqrt(a)*tan(sqrt(a)) forms of the F/G equations, via
/// a*ufun(a) = sqrt(a)*tan(sqrt(a)). Kept as a cross-check of the cleared
/// residuals; PoleProximity propagates to the caller.
inline double tan_form_residual(SetId id, std::span<const double> a) {
    detail::check_arity(id, a, "tan_form_residual");
    switch (id) {
    case SetId::F2: {
        double u1 = a[0] * ufun(a[0]), u2 = a[1] * ufun(a[1]);
        return u1 + u2 - u1 * u2;
    }
    case SetId::G2:
        return a[0] * ufun(a[0]) + a[1] * ufun(a[1]);
    case SetId::G3: {
        double u1 = a[0] * ufun(a[0]), u2 = a[1] * ufun(a[1]), u3 = a[2] * ufun(a[2]);
        return u1 + u2 + u3 - u1 * u2 * u3 / a[1];
    }
    case SetId::F3: {
        double u1 = a[0] * ufun(a[0]), u2 = a[1] * ufun(a[1]), u3 = a[2] * ufun(a[2]);
        return u1 + u2 + u3 - u1 * u2 - 2.0 * u1 * u3 - u2 * u3 +
               (a[1] - 1.0) * u1 * u2 * u3 / a[1];
    }
    default:
        throw std::invalid_argument("tan_form_residual: only F and G sets have tan forms");
    }
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

struct ScanOptions {
    int cells = 0;                 // 0 = auto: 2000 per window of width 100
    double refine_tol = 1e-12;     // bisection target on the solved coordinate
    double zero_exclusion = 1e-9;  // intensities are nonzero by definition
};

namespace detail {

inline int auto_cells(const Interval& iv, const ScanOptions& opt) {
    if (opt.cells > 0)
        return opt.cells;
    double per_unit = 20.0; // 2000 cells per width-100 window
    return std::max(64, static_cast<int>(std::ceil(per_unit * iv.width())));
}

template <class Fn>
double bisect(Fn&& f, double lo, double hi, double flo, double tol) {
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((flo < 0.0) != (fm < 0.0))
            hi = mid;
        else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// All transversal roots of f on the interval: uniform scan for sign
/// changes, bisection refinement. Grazing (even-multiplicity) roots
/// between grid nodes are not detected.
template <class Fn>
std::vector<double> scan_roots(Fn&& f, const Interval& iv, const ScanOptions& opt) {
    int cells = auto_cells(iv, opt);
    std::vector<double> roots;
    double h = iv.width() / cells;
    double x0 = iv.lo, f0 = f(x0);
    for (int c = 0; c < cells; ++c) {
        double x1 = iv.lo + (c + 1) * h;
        double f1 = f(x1);
        if (f0 == 0.0)
            roots.push_back(x0);
        else if (f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0))
            roots.push_back(bisect(f, x0, x1, f0, opt.refine_tol));
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0)
        roots.push_back(x0);
    // drop excluded zeros and merge duplicates from cell boundaries
    std::vector<double> out;
    for (double rt : roots) {
        if (std::abs(rt) <= opt.zero_exclusion)
            continue;
        if (!out.empty() && std::abs(rt - out.back()) <= 4.0 * opt.refine_tol)
            continue;
        out.push_back(rt);
    }
    return out;
}

} // namespace detail

/// Roots of the set equation in the last coordinate, given the others.
/// K and L solve in closed form; F and G bracket the cleared residual on
/// a uniform scan and refine by bisection.
inline std::vector<double> solve_last(SetId id, std::span<const double> partial,
                                      const Interval& search, const ScanOptions& opt = {}) {
    if (!set_is_solvable(id))
        throw std::invalid_argument("solve_last: " + set_name(id) + " has no equation to solve");
    if (static_cast<int>(partial.size()) != set_arity(id) - 1)
        throw ArityMismatch("solve_last: partial vector must omit exactly the last intensity");
    for (double v : partial)
        if (v == 0.0)
            throw std::invalid_argument("intensity must be nonzero");

    auto finish = [&](double root) {
        std::vector<double> out;
        if (root >= search.lo && root <= search.hi && std::abs(root) > opt.zero_exclusion)
            out.push_back(root);
        if (out.empty())
            throw NoRootInInterval("solve_last: " + set_name(id) +
                                   " root lies outside the search interval");
        return out;
    };

    switch (id) {
    case SetId::K2: {
        double den = partial[0] - 1.0;
        if (std::abs(den) < 1e-12)
            throw DegenerateDenominator("K2: a1 - 1");
        return finish(partial[0] / den);
    }
    case SetId::K3: {
        double den = 1.0 - 2.0 * partial[0] - partial[1] + partial[0] * partial[1];
        if (std::abs(den) < 1e-12)
            throw DegenerateDenominator("K3: 1 - 2*a1 - a2 + a1*a2");
        return finish((partial[0] * partial[1] - partial[0] - partial[1]) / den);
    }
    case SetId::L2:
        return finish(-partial[0]);
    case SetId::L3:
        return finish(-partial[0] - partial[1]);
    default: {
        std::array<double, 3> point{};
        std::copy(partial.begin(), partial.end(), point.begin());
        int last = set_arity(id) - 1;
        auto f = [&](double x) {
            point[static_cast<std::size_t>(last)] = x;
            return residual(id, std::span<const double>(point.data(),
                                                        static_cast<std::size_t>(last + 1)));
        };
        std::vector<double> roots = detail::scan_roots(f, search, opt);
        if (roots.empty())
            throw NoRootInInterval("solve_last: no " + set_name(id) +
                                   " root bracketed in the search interval");
        return roots;
    }
    }
}

/// One connected solution branch, points in sampling order.
struct ResonanceBranch {
    SetId set = SetId::K2;
    std::vector<std::array<double, 3>> points; // third slot unused for arity-2 sets
};

namespace detail {

struct ColumnSweep {
    std::vector<double> grid;
    std::vector<std::vector<double>> roots; // per grid column, sorted
};

inline std::vector<ResonanceBranch> link_branches(SetId id, const ColumnSweep& sweep,
                                                  double jump_threshold, bool surface,
                                                  double fixed_a1) {
    std::vector<ResonanceBranch> branches;
    std::vector<int> open;       // branch index per open end
    std::vector<double> open_at; // last solved value per open end
    for (std::size_t col = 0; col < sweep.grid.size(); ++col) {
        const auto& roots = sweep.roots[col];
        std::vector<int> next_open;
        std::vector<double> next_at;
        std::vector<bool> taken(open.size(), false);
        for (double rt : roots) {
            int best = -1;
            double best_d = jump_threshold;
            for (std::size_t j = 0; j < open.size(); ++j) {
                if (taken[j])
                    continue;
                double dist = std::abs(rt - open_at[j]);
                if (dist < best_d) {
                    best_d = dist;
                    best = static_cast<int>(j);
                }
            }
            int branch_idx;
            if (best >= 0) {
                taken[static_cast<std::size_t>(best)] = true;
                branch_idx = open[static_cast<std::size_t>(best)];
            } else {
                branch_idx = static_cast<int>(branches.size());
                branches.push_back({id, {}});
            }
            double x = sweep.grid[col];
            if (surface)
                branches[static_cast<std::size_t>(branch_idx)].points.push_back({fixed_a1, x, rt});
            else
                branches[static_cast<std::size_t>(branch_idx)].points.push_back({x, rt, 0.0});
            next_open.push_back(branch_idx);
            next_at.push_back(rt);
        }
        open = std::move(next_open);
        open_at = std::move(next_at);
    }
    return branches;
}

template <class Solver>
ColumnSweep sweep_columns(const Interval& range, int samples, Solver&& solve) {
    if (samples < 2)
        throw std::invalid_argument("trace needs at least 2 samples");
    ColumnSweep sweep;
    sweep.grid.resize(static_cast<std::size_t>(samples));
    sweep.roots.resize(static_cast<std::size_t>(samples));
    double step = range.width() / (samples - 1);
    for (int i = 0; i < samples; ++i)
        sweep.grid[static_cast<std::size_t>(i)] = range.lo + i * step;
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        try {
            sweep.roots[i] = solve(sweep.grid[i]);
        } catch (const NoRootInInterval&) {
        } catch (const DegenerateDenominator&) {
        } catch (const std::invalid_argument&) { // grid value hit zero exclusion
        }
        std::sort(sweep.roots[i].begin(), sweep.roots[i].end());
    });
    return sweep;
}

} // namespace detail

/// Solution curve of an arity-2 set over an a1 grid: all a2 roots inside
/// `window` per column, linked into branches by nearest-neighbour
/// continuation (jump threshold 5x the sampling step).
inline std::vector<ResonanceBranch> trace_curve(SetId id, const Interval& a1_range, int samples,
                                                const Interval& window,
                                                const ScanOptions& opt = {}) {
    if (set_arity(id) != 2 || !set_is_solvable(id))
        throw std::invalid_argument("trace_curve handles the solvable arity-2 sets");
    auto sweep = detail::sweep_columns(a1_range, samples, [&](double a1) {
        std::array<double, 1> partial{a1};
        return solve_last(id, partial, window, opt);
    });
    double step = a1_range.width() / (samples - 1);
    return detail::link_branches(id, sweep, 5.0 * step, false, 0.0);
}

/// Constant-a1 slice of an arity-3 set: a3 solved per (a1, a2) column.
inline std::vector<ResonanceBranch> slice_surface(SetId id, double a1, const Interval& a2_range,
                                                  int samples, const Interval& window,
                                                  const ScanOptions& opt = {}) {
    if (set_arity(id) != 3 || !set_is_solvable(id))
        throw std::invalid_argument("slice_surface handles the solvable arity-3 sets");
    auto sweep = detail::sweep_columns(a2_range, samples, [&](double a2) {
        std::array<double, 2> partial{a1, a2};
        return solve_last(id, partial, window, opt);
    });
    double step = a2_range.width() / (samples - 1);
    return detail::link_branches(id, sweep, 5.0 * step, true, a1);
}

/// All sets the point belongs to at the given tolerance. Cleared
/// residuals decide K/L/F/G; the P and Q subsets go by their defining
/// sin/cos conditions, and a Q hit grants the enclosing G set membership
/// in the limiting sense (the tan form diverges there, the cleared
/// residual only vanishes to first order).
inline std::vector<SetId> membership(std::span<const double> a, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("membership tolerance must be positive");
    std::vector<SetId> out;
    auto hit = [&](SetId id) { return std::abs(residual(id, a)) < tol; };
    if (a.size() == 2) {
        bool q = hit(SetId::Q2);
        if (hit(SetId::K2)) out.push_back(SetId::K2);
        if (hit(SetId::L2)) out.push_back(SetId::L2);
        if (hit(SetId::F2)) out.push_back(SetId::F2);
        if (hit(SetId::G2) || q) out.push_back(SetId::G2);
        if (hit(SetId::P2)) out.push_back(SetId::P2);
        if (q) out.push_back(SetId::Q2);
        return out;
    }
    if (a.size() == 3) {
        bool q1 = hit(SetId::Q3_1), q2 = hit(SetId::Q3_2), q3 = hit(SetId::Q3_3);
        if (hit(SetId::K3)) out.push_back(SetId::K3);
        if (hit(SetId::L3)) out.push_back(SetId::L3);
        if (hit(SetId::F3)) out.push_back(SetId::F3);
        if (hit(SetId::G3) || q1 || q2 || q3) out.push_back(SetId::G3);
        if (hit(SetId::P3)) out.push_back(SetId::P3);
        if (q1) out.push_back(SetId::Q3_1);
        if (q2) out.push_back(SetId::Q3_2);
        if (q3) out.push_back(SetId::Q3_3);
        return out;
    }
    throw ArityMismatch("membership expects 2 or 3 intensities");
}

} // namespace squeeze
