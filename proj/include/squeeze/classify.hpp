#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "squeeze/entire.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/extrapolation.hpp"
#include "squeeze/matrix2.hpp"
#include "squeeze/paths.hpp"
#include "squeeze/resonance.hpp"

namespace squeeze {

enum class InteractionKind {
    DeltaPrimePotential, // diag(theta, 1/theta)
    Delta,               // [[1,0],[alpha,1]] up to an overall sign theta = +-1
    DeltaPrimeInteraction, // [[1,beta],[0,1]]; in the taxonomy, never produced by classify
    DeltaPrimePlusDelta, // [[theta,0],[alpha,1/theta]]
    Reflectionless,      // sign * I
    SeparatedDirichlet,  // psi(+-0) = 0, no transfer matrix
    NotConverged
};

enum class Provenance { ClosedForm, Numeric };

struct LimitInteraction {
    InteractionKind kind = InteractionKind::SeparatedDirichlet;
    Provenance provenance = Provenance::ClosedForm;
    double theta = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    int sign = 0;                     // Reflectionless: Lambda = sign * I
    std::array<double, 4> exponents{};// NotConverged: fitted eps powers per element

    bool has_matrix() const {
        return kind != InteractionKind::SeparatedDirichlet &&
               kind != InteractionKind::NotConverged;
    }

    Mat2 matrix() const {
        switch (kind) {
        case InteractionKind::DeltaPrimePotential:
            return {theta, 0.0, 0.0, 1.0 / theta};
        case InteractionKind::Delta: {
            double s = theta == theta ? theta : 1.0; // overall sign, +1 unless set
            return {s, 0.0, s * alpha, s};
        }
        case InteractionKind::DeltaPrimeInteraction:
            return {1.0, beta, 0.0, 1.0};
        case InteractionKind::DeltaPrimePlusDelta:
            return {theta, 0.0, alpha, 1.0 / theta};
        case InteractionKind::Reflectionless:
            return {double(sign), 0.0, 0.0, double(sign)};
        default:
            throw std::logic_error("no transfer matrix exists for " + kind_name());
        }
    }

    std::string kind_name() const {
        switch (kind) {
        case InteractionKind::DeltaPrimePotential: return "delta_prime_potential";
        case InteractionKind::Delta: return "delta";
        case InteractionKind::DeltaPrimeInteraction: return "delta_prime_interaction";
        case InteractionKind::DeltaPrimePlusDelta: return "delta_prime_plus_delta";
        case InteractionKind::Reflectionless: return "reflectionless";
        case InteractionKind::SeparatedDirichlet: return "separated_dirichlet";
        default: return "not_converged";
        }
    }
};

/// Default membership tolerance on cleared residuals. The classification
/// flips discontinuously across the resonance sets, so residuals inside
/// (tol, 10*tol) raise AmbiguousMembership instead of rounding silently.
inline constexpr double kMembershipTol = 1e-9;

// ---------------------------------------------------------------- maps

/// theta = (1 + (1-eta)*gamma) / (1 - eta*gamma)
inline double gamma_to_theta(double gamma, double eta) {
    double den = 1.0 - eta * gamma;
    if (std::abs(den) < 1e-14 * (1.0 + std::abs(eta * gamma)))
        throw DivisionByZero("1 - eta*gamma");
    return (1.0 + (1.0 - eta) * gamma) / den;
}

/// Inverse map gamma = (theta - 1) / (eta*theta + 1 - eta)
inline double theta_to_gamma(double theta, double eta) {
    double den = eta * theta + 1.0 - eta;
    if (std::abs(den) < 1e-14 * (1.0 + std::abs(eta * theta)))
        throw DivisionByZero("eta*theta + 1 - eta");
    return (theta - 1.0) / den;
}

/// K2 point realizing the delta'-potential of strength gamma.
inline std::array<double, 2> k2_point_from_gamma(double gamma, double eta) {
    double d1 = 1.0 - eta * gamma;
    if (std::abs(d1) < 1e-14 * (1.0 + std::abs(eta * gamma)))
        throw DivisionByZero("1 - eta*gamma");
    double d2 = 1.0 + (1.0 - eta) * gamma;
    if (std::abs(d2) < 1e-14 * (1.0 + std::abs((1.0 - eta) * gamma)))
        throw DivisionByZero("1 + (1-eta)*gamma");
    return {-gamma / d1, gamma / d2};
}

/// K3 point with free middle intensity a2 != 2.
inline std::array<double, 3> k3_point_from_gamma(double a2, double gamma, double eta) {
    double d0 = a2 - 2.0;
    if (std::abs(d0) < 1e-14 * (1.0 + std::abs(a2)))
        throw DivisionByZero("a2 - 2");
    double d1 = 1.0 - eta * gamma;
    if (std::abs(d1) < 1e-14 * (1.0 + std::abs(eta * gamma)))
        throw DivisionByZero("1 - eta*gamma");
    double d2 = 1.0 + (1.0 - eta) * gamma;
    if (std::abs(d2) < 1e-14 * (1.0 + std::abs((1.0 - eta) * gamma)))
        throw DivisionByZero("1 + (1-eta)*gamma");
    return {(a2 + gamma / d1) / d0, a2, (a2 - gamma / d2) / d0};
}

// ------------------------------------------------- K-set limit elements

namespace detail {

inline double theta_K_value(std::span<const double> a) {
    return a.size() == 2 ? 1.0 - a[0] : 1.0 - 2.0 * a[0] - a[1] + a[0] * a[1];
}

inline double rho_K_value(std::span<const double> a) {
    return a.size() == 2 ? 1.0 - a[1] : 1.0 - a[1] - 2.0 * a[2] + a[1] * a[2];
}

inline void require_on(SetId id, std::span<const double> a, double tol, const char* who) {
    double r = std::abs(residual(id, a));
    if (r >= tol)
        throw OffSet(std::string(who) + ": residual " + std::to_string(r) + " of " +
                     set_name(id) + " exceeds tolerance");
}

} // namespace detail

/// lambda11 limit on the K-sets (branch-a paths); companion rho = lambda22
/// satisfies rho*theta = 1 on the set.
inline double theta_K(std::span<const double> a, double tol = kMembershipTol) {
    detail::check_arity(a.size() == 3 ? SetId::K3 : SetId::K2, a, "theta_K");
    detail::require_on(a.size() == 3 ? SetId::K3 : SetId::K2, a, tol, "theta_K");
    return detail::theta_K_value(a);
}

inline double rho_K(std::span<const double> a, double tol = kMembershipTol) {
    detail::require_on(a.size() == 3 ? SetId::K3 : SetId::K2, a, tol, "rho_K");
    return detail::rho_K_value(a);
}

// ---------------------------------------------- F/G dual-form elements

namespace detail {

/// Guard below which a representation's denominator is unusable.
inline constexpr double kFormGuard = 1e-8;

struct DualForm {
    double num_a = 0, den_a = 0, num_b = 0, den_b = 0;

    double pick(const char* what) const {
        double va = std::abs(den_a), vb = std::abs(den_b);
        if (va < kFormGuard && vb < kFormGuard)
            throw BothFormsDegenerate(std::string(what) +
                                      ": both representations are 0/0 at this point");
        return va >= vb ? num_a / den_a : num_b / den_b;
    }
};

inline DualForm lambda11_F_forms(std::span<const double> a) {
    if (a.size() == 2) {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return {c1 - a[0] * s1, c2, -a[0] * s1, a[1] * s2};
    }
    double c1 = cfun(a[0]), s1 = sfun(a[0]);
    double c2 = cfun(a[1]), s2 = sfun(a[1]);
    double c3 = cfun(a[2]), s3 = sfun(a[2]);
    double num_a = c1 * c2 - 2.0 * a[0] * s1 * c2 - a[1] * c1 * s2 +
                   (a[0] * a[1] - a[0]) * s1 * s2;
    double num_b = a[0] * a[1] * s1 * s2 - a[0] * s1 * c2 - a[1] * c1 * s2;
    return {num_a, c3, num_b, a[2] * s3};
}

inline DualForm lambda22_F_forms(std::span<const double> a) {
    if (a.size() == 2) {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return {c2 - a[1] * s2, c1, -a[1] * s2, a[0] * s1};
    }
    double c1 = cfun(a[0]), s1 = sfun(a[0]);
    double c2 = cfun(a[1]), s2 = sfun(a[1]);
    double c3 = cfun(a[2]), s3 = sfun(a[2]);
    double num_a = c2 * c3 - 2.0 * a[2] * c2 * s3 - a[1] * s2 * c3 +
                   (a[1] * a[2] - a[2]) * s2 * s3;
    double num_b = a[1] * a[2] * s2 * s3 - a[1] * s2 * c3 - a[2] * c2 * s3;
    return {num_a, c1, num_b, a[0] * s1};
}

inline DualForm lambda11_G_forms(std::span<const double> a) {
    if (a.size() == 2) {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return {c1, c2, -a[0] * s1, a[1] * s2};
    }
    double c1 = cfun(a[0]), s1 = sfun(a[0]);
    double c2 = cfun(a[1]), s2 = sfun(a[1]);
    double c3 = cfun(a[2]), s3 = sfun(a[2]);
    return {c1 * c2 - a[0] * s1 * s2, c3, -(a[0] * s1 * c2 + a[1] * c1 * s2), a[2] * s3};
}

inline DualForm lambda22_G_forms(std::span<const double> a) {
    if (a.size() == 2) {
        double c1 = cfun(a[0]), s1 = sfun(a[0]), c2 = cfun(a[1]), s2 = sfun(a[1]);
        return {c2, c1, -a[1] * s2, a[0] * s1};
    }
    double c1 = cfun(a[0]), s1 = sfun(a[0]);
    double c2 = cfun(a[1]), s2 = sfun(a[1]);
    double c3 = cfun(a[2]), s3 = sfun(a[2]);
    return {c2 * c3 - a[2] * s2 * s3, c1, -(a[1] * s2 * c3 + a[2] * c2 * s3), a[0] * s1};
}

inline double alpha_G_value(std::span<const double> a) {
    if (a.size() == 2)
        return a[0] * a[1] * sfun(a[0]) * sfun(a[1]);
    double c1 = cfun(a[0]), s1 = sfun(a[0]);
    double c2 = cfun(a[1]), s2 = sfun(a[1]);
    double c3 = cfun(a[2]), s3 = sfun(a[2]);
    return a[0] * a[1] * s1 * s2 * c3 + 2.0 * a[0] * a[2] * s1 * c2 * s3 +
           a[1] * a[2] * c1 * s2 * s3;
}

inline bool q_subset_member(std::span<const double> a, double tol) {
    if (a.size() == 2)
        return residual(SetId::Q2, a) < tol;
    return residual(SetId::Q3_1, a) < tol || residual(SetId::Q3_2, a) < tol ||
           residual(SetId::Q3_3, a) < tol;
}

} // namespace detail

inline double lambda11_F(std::span<const double> a) {
    return detail::lambda11_F_forms(a).pick("lambda11_F");
}
inline double lambda22_F(std::span<const double> a) {
    return detail::lambda22_F_forms(a).pick("lambda22_F");
}
inline double lambda11_G(std::span<const double> a) {
    return detail::lambda11_G_forms(a).pick("lambda11_G");
}
inline double lambda22_G(std::span<const double> a) {
    return detail::lambda22_G_forms(a).pick("lambda22_G");
}

/// theta on the F-sets (path 4a): the better-conditioned of the two
/// representations, with lambda11*lambda22 = 1 checked on the way out.
/// At P-subset points the sin-based form is 0/0 while the cosine form
/// stays conditioned and returns the parity sign (+-1) directly; cos and
/// sin cannot vanish together, so BothFormsDegenerate only guards
/// genuinely broken inputs.
inline double theta_F(std::span<const double> a, double tol = kMembershipTol) {
    detail::check_arity(a.size() == 3 ? SetId::F3 : SetId::F2, a, "theta_F");
    detail::require_on(a.size() == 3 ? SetId::F3 : SetId::F2, a, tol, "theta_F");
    double l11 = lambda11_F(a);
    double l22 = lambda22_F(a);
    if (std::abs(l11 * l22 - 1.0) > 1e-6 * (1.0 + std::abs(l11 * l22)))
        throw OffSet("theta_F: lambda11*lambda22 deviates from 1; point is not accurately on "
                     "the F-set");
    return l11;
}

/// (theta, alpha) on the G-sets: path 4c keeps the finite off-diagonal
/// alpha, path 4d sends it to zero.
inline std::pair<double, double> theta_alpha_G(std::span<const double> a, char branch,
                                               double tol = kMembershipTol) {
    if (branch != 'c' && branch != 'd')
        throw std::invalid_argument("theta_alpha_G: branch must be 'c' (tau = 2) or 'd' (tau > 2)");
    SetId g = a.size() == 3 ? SetId::G3 : SetId::G2;
    detail::check_arity(g, a, "theta_alpha_G");
    if (!detail::q_subset_member(a, tol))
        detail::require_on(g, a, tol, "theta_alpha_G");
    double l11 = lambda11_G(a);
    double l22 = lambda22_G(a);
    if (std::abs(l11 * l22 - 1.0) > 1e-6 * (1.0 + std::abs(l11 * l22)))
        throw OffSet("theta_alpha_G: lambda11*lambda22 deviates from 1; point is not "
                     "accurately on the G-set");
    return {l11, branch == 'c' ? detail::alpha_G_value(a) : 0.0};
}

/// Reflectionless sign at P-subset points a_j = (n_j pi)^2:
/// lambda11 = prod cos(n_j pi) = (-1)^(n_1+...+n_N).
inline int p_subset_sign(std::span<const double> a) {
    long total = 0;
    for (double ai : a)
        total += std::lround(std::sqrt(ai) / std::numbers::pi);
    return (total % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------- symmetric N=3 G-branch

/// Which diagonal sign the symmetric (a1, a2, a1) branch realizes.
enum class SymBranch { ThetaPlus, ThetaMinus };

/// Right-hand side of the symmetric branch equation
/// sqrt(a1) tan(sqrt(a1)) = (cfun(a2) -+ 1) / sfun(a2),
/// evaluated through half-angle forms for a2 > 0 to step over the
/// sfun zeros. Throws NoRoot where the half-angle tangent itself is at a
/// pole (ThetaPlus at sqrt(a2) near odd multiples of pi, ThetaMinus near
/// even ones): the right-hand side diverges there.
inline double symmetric_branch_rhs(double a2, SymBranch branch) {
    if (a2 > 0.0) {
        double x = std::sqrt(a2);
        if (branch == SymBranch::ThetaPlus) {
            if (std::abs(std::cos(0.5 * x)) < kPoleGuard)
                throw NoRoot("symmetric_branch_rhs: right-hand side is singular at this a2");
            return -x * std::tan(0.5 * x);
        }
        if (std::abs(std::sin(0.5 * x)) < kPoleGuard)
            throw NoRoot("symmetric_branch_rhs: right-hand side is singular at this a2");
        return x / std::tan(0.5 * x);
    }
    double c = cfun(a2), s = sfun(a2);
    return (branch == SymBranch::ThetaPlus ? c - 1.0 : c + 1.0) / s;
}

/// All a1 roots of the symmetric branch equation in the window, from the
/// cleared form a1*sfun(a1) - rhs*cfun(a1) = 0 (entire in a1).
inline std::vector<double> symmetric_branch_a1(double a2, SymBranch branch,
                                               const Interval& window,
                                               const ScanOptions& opt = {}) {
    double rhs = symmetric_branch_rhs(a2, branch);
    auto f = [rhs](double x) { return x * sfun(x) - rhs * cfun(x); };
    std::vector<double> roots = detail::scan_roots(f, window, opt);
    if (roots.empty())
        throw NoRoot("symmetric_branch_a1: no root in the window");
    return roots;
}

// -------------------------------------------------------- classification

namespace detail {

inline LimitInteraction dirichlet() {
    LimitInteraction li;
    li.kind = InteractionKind::SeparatedDirichlet;
    return li;
}

inline LimitInteraction reflectionless(int sign) {
    LimitInteraction li;
    li.kind = InteractionKind::Reflectionless;
    li.sign = sign;
    li.theta = sign;
    li.alpha = 0.0;
    return li;
}

inline LimitInteraction delta_potential(double alpha, double overall = 1.0) {
    LimitInteraction li;
    li.kind = InteractionKind::Delta;
    li.alpha = alpha;
    li.theta = overall;
    return li;
}

inline LimitInteraction delta_prime_potential(double theta, double tol) {
    if (std::abs(theta - 1.0) <= tol)
        return reflectionless(+1);
    if (std::abs(theta + 1.0) <= tol)
        return reflectionless(-1);
    LimitInteraction li;
    li.kind = InteractionKind::DeltaPrimePotential;
    li.theta = theta;
    return li;
}

/// Lambda = [[theta,0],[alpha,1/theta]]. theta = +-1 factors out as an
/// overall sign, leaving a plain delta of strength theta*alpha.
inline LimitInteraction dprime_plus_delta(double theta, double alpha, double tol) {
    if (std::abs(alpha) <= tol)
        return delta_prime_potential(theta, tol);
    if (std::abs(theta - 1.0) <= tol)
        return delta_potential(alpha, +1.0);
    if (std::abs(theta + 1.0) <= tol)
        return delta_potential(-alpha, -1.0);
    LimitInteraction li;
    li.kind = InteractionKind::DeltaPrimePlusDelta;
    li.theta = theta;
    li.alpha = alpha;
    return li;
}

/// Membership with the explicit ambiguity band (tol, 10*tol).
inline bool on_set_banded(SetId id, std::span<const double> a, double tol) {
    double r = std::abs(residual(id, a));
    if (r < tol)
        return true;
    if (r < 10.0 * tol)
        throw AmbiguousMembership(set_name(id), r);
    return false;
}

inline bool on_p_banded(std::span<const double> a, double tol) {
    return on_set_banded(a.size() == 3 ? SetId::P3 : SetId::P2, a, tol);
}

inline bool on_q_banded(std::span<const double> a, double tol) {
    if (a.size() == 2)
        return on_set_banded(SetId::Q2, a, tol);
    bool q = false;
    for (SetId id : {SetId::Q3_1, SetId::Q3_2, SetId::Q3_3})
        q = on_set_banded(id, a, tol) || q;
    return q;
}

} // namespace detail

/// Limit interaction for (a, path) following the closed-form
/// classification tables: governing set by path family and branch,
/// membership on cleared residuals, limit matrix from the set's theta
/// and alpha expressions. Off every governing set the point interaction
/// is separated (Dirichlet).
inline LimitInteraction classify(std::span<const double> a, const SqueezePath& path,
                                 double tol = kMembershipTol) {
    PathLabel label = path_family(path.mu, path.tau);
    if (a.size() != 2 && a.size() != 3)
        throw ArityMismatch("classify expects 2 or 3 intensities");
    for (double ai : a)
        if (ai == 0.0 || !std::isfinite(ai))
            throw std::invalid_argument("intensity must be nonzero and finite");
    if (!(tol > 0.0))
        throw std::invalid_argument("classification tolerance must be positive");

    bool n3 = a.size() == 3;
    SetId K = n3 ? SetId::K3 : SetId::K2;
    SetId L = n3 ? SetId::L3 : SetId::L2;
    SetId F = n3 ? SetId::F3 : SetId::F2;

    switch (label.branch) {
    case 'a':
        if (label.family <= 3) {
            // the eps^(mu-3) term rules out connected N=3 interactions below mu = 3
            if (n3 && label.family == 3)
                return detail::dirichlet();
            if (!detail::on_set_banded(K, a, tol))
                return detail::dirichlet();
            double th = detail::theta_K_value(a);
            if (n3 && label.family == 2)
                return detail::dprime_plus_delta(th, a[0] * a[2], tol);
            return detail::delta_prime_potential(th, tol);
        }
        if (detail::on_p_banded(a, tol))
            return detail::reflectionless(p_subset_sign(a));
        if (!detail::on_set_banded(F, a, tol))
            return detail::dirichlet();
        return detail::delta_prime_potential(lambda11_F(a), tol);

    case 'b':
        if (label.family == 4 && detail::on_p_banded(a, tol))
            return detail::reflectionless(p_subset_sign(a));
        return detail::dirichlet();

    case 'c':
        if (label.family <= 3) {
            if (n3 && label.family == 3)
                return detail::dirichlet();
            if (!detail::on_set_banded(L, a, tol))
                return detail::dirichlet();
            double alpha;
            if (!n3)
                alpha = a[0] * a[1];
            else if (label.family == 2)
                alpha = a[0] * a[1] + 3.0 * a[0] * a[2] + a[1] * a[2];
            else
                alpha = a[0] * a[1] + 2.0 * a[0] * a[2] + a[1] * a[2];
            return detail::delta_potential(alpha);
        }
        if (detail::on_p_banded(a, tol))
            return detail::reflectionless(p_subset_sign(a));
        if (!(detail::on_q_banded(a, tol) ||
              detail::on_set_banded(n3 ? SetId::G3 : SetId::G2, a, tol)))
            return detail::dirichlet();
        {
            auto [th, al] = theta_alpha_G(a, 'c', tol);
            return detail::dprime_plus_delta(th, al, tol);
        }

    default: // 'd'
        if (label.family <= 3) {
            if (n3 && label.family == 3)
                return detail::dirichlet();
            if (!detail::on_set_banded(L, a, tol))
                return detail::dirichlet();
            if (n3 && label.family == 2)
                return detail::delta_potential(a[0] * a[2]);
            return detail::reflectionless(+1);
        }
        if (detail::on_p_banded(a, tol))
            return detail::reflectionless(p_subset_sign(a));
        if (!(detail::on_q_banded(a, tol) ||
              detail::on_set_banded(n3 ? SetId::G3 : SetId::G2, a, tol)))
            return detail::dirichlet();
        {
            auto [th, al] = theta_alpha_G(a, 'd', tol);
            (void)al;
            return detail::delta_prime_potential(th, tol);
        }
    }
}

/// Diagnostic wrapper for traces whose limit estimate did not settle.
inline LimitInteraction not_converged(const LimitEstimate& est) {
    LimitInteraction li;
    li.kind = InteractionKind::NotConverged;
    li.provenance = Provenance::Numeric;
    for (int i = 0; i < 4; ++i) {
        const ElementEstimate& e = est.element(i);
        li.exponents[static_cast<std::size_t>(i)] =
            e.kind == ElementEstimate::Kind::PowerLaw ? e.exponent : 0.0;
    }
    return li;
}

} // namespace squeeze
