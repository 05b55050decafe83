#pragma once

// Cross-validation suite behind the `verify` CLI command: module
// invariants, reference-formula comparisons, and one witness per row of
// the two classification tables. Each check reports pass or fail; rows
// where the exact product limit is known to differ from the tabulated
// closed form (layer-width corrections at order eps^(mu-3) that the
// reduced asymptotics drop for mu <= 3) are flagged as known deviations
// so the default run still distinguishes fresh regressions from the
// documented boundary behaviour.

#include <chrono>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "squeeze/classify.hpp"
#include "squeeze/extrapolation.hpp"
#include "squeeze/paths.hpp"
#include "squeeze/resonance.hpp"
#include "squeeze/scattering.hpp"
#include "squeeze/transfer.hpp"

namespace squeeze::verify {

enum class Status { Pass, Fail, KnownDeviation };

struct CheckResult {
    std::string name;
    Status status = Status::Pass;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    int count(Status s) const {
        int n = 0;
        for (const auto& c : checks)
            if (c.status == s)
                ++n;
        return n;
    }
    bool ok() const { return count(Status::Fail) == 0; }
};

struct Options {
    /// Scales every tolerance; 1e-20 turns the whole suite into a fault
    /// injection (nothing passes).
    double tol_scale = 1.0;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Checker {
    double tol_scale = 1.0;
    std::vector<CheckResult> out;

    void bound(const std::string& name, double worst, double tol, bool known = false,
               const std::string& note = "") {
        CheckResult c;
        c.name = name;
        double t = tol * tol_scale;
        bool pass = worst <= t;
        c.status = pass ? Status::Pass : (known ? Status::KnownDeviation : Status::Fail);
        c.detail = "worst " + fmt(worst) + " vs tol " + fmt(t);
        if (!note.empty() && !pass)
            c.detail += "; " + note;
        out.push_back(std::move(c));
    }

    void flag(const std::string& name, bool pass, const std::string& detail, bool known = false) {
        CheckResult c;
        c.name = name;
        c.status = pass ? Status::Pass : (known ? Status::KnownDeviation : Status::Fail);
        c.detail = detail;
        out.push_back(std::move(c));
    }
};

// ------------------------------------------------ reference asymptotics

using cplx = std::complex<double>;

struct TrigSet {
    cplx k1, k2, k3, s1, s2, s3, c1, c2, c3;
};

inline TrigSet trig_layers(std::span<const double> a, double eps, double l, double k) {
    TrigSet t;
    auto kj = [&](double aj) { return std::sqrt(cplx(k * k + aj / (eps * l), 0.0)); };
    t.k1 = kj(a[0]);
    t.k2 = kj(a[1]);
    t.k3 = a.size() > 2 ? kj(a[2]) : cplx(0.0);
    t.s1 = std::sin(t.k1 * l);
    t.s2 = std::sin(t.k2 * l);
    t.c1 = std::cos(t.k1 * l);
    t.c2 = std::cos(t.k2 * l);
    if (a.size() > 2) {
        t.s3 = std::sin(t.k3 * l);
        t.c3 = std::cos(t.k3 * l);
    }
    return t;
}

/// Leading asymptotics of the two-layer product for mu > 2 (finite but
/// shrinking k_j l, first order in r).
inline Mat2 asym_mu_gt2_n2(std::span<const double> a, double eps, double mu, double tau,
                           double k) {
    double l = std::pow(eps, mu - 1.0), r = std::pow(eps, tau);
    TrigSet t = trig_layers(a, eps, l, k);
    cplx l11 = t.c1 * t.c2 - (t.k1 / t.k2) * t.s1 * t.s2 - t.k1 * r * t.s1 * t.c2;
    cplx l21 = -t.k1 * t.s1 * t.c2 - t.k2 * t.c1 * t.s2 + t.k1 * t.k2 * r * t.s1 * t.s2;
    cplx l22 = t.c1 * t.c2 - (t.k2 / t.k1) * t.s1 * t.s2 - t.k2 * r * t.c1 * t.s2;
    return {l11.real(), 0.0, l21.real(), l22.real()};
}

/// Three-layer analogue, first order in r on the diagonal, the stated
/// r^2 and k^2 pieces kept in the off-diagonal entries.
inline Mat2 asym_mu_gt2_n3(std::span<const double> a, double eps, double mu, double tau,
                           double k) {
    double l = std::pow(eps, mu - 1.0), r = std::pow(eps, tau);
    TrigSet t = trig_layers(a, eps, l, k);
    cplx l11 = t.c1 * t.c2 * t.c3 - (t.k1 / t.k2) * t.s1 * t.s2 * t.c3 -
               (t.k1 / t.k3) * t.s1 * t.c2 * t.s3 - (t.k2 / t.k3) * t.c1 * t.s2 * t.s3 -
               2.0 * t.k1 * r * t.s1 * t.c2 * t.c3 - t.k2 * r * t.c1 * t.s2 * t.c3 +
               t.k1 * t.k2 * r * r * t.s1 * t.s2 * t.c3 +
               (t.k1 * t.k2 * r / t.k3) * t.s1 * t.s2 * t.s3;
    cplx l12 = -t.k2 * r * r * t.c1 * t.s2 * t.c3;
    cplx l21 = -t.k1 * t.s1 * t.c2 * t.c3 - t.k2 * t.c1 * t.s2 * t.c3 -
               t.k3 * t.c1 * t.c2 * t.s3 + t.k1 * t.k2 * r * t.s1 * t.s2 * t.c3 +
               2.0 * t.k1 * t.k3 * r * t.s1 * t.c2 * t.s3 +
               t.k2 * t.k3 * r * t.c1 * t.s2 * t.s3 +
               t.k1 * t.k3 * (1.0 / t.k2 - t.k2 * r * r) * t.s1 * t.s2 * t.s3 +
               k * k * r * r * t.c2 * (t.k1 * t.s1 * t.c3 + t.k3 * t.c1 * t.s3);
    cplx l22 = t.c1 * t.c2 * t.c3 - (t.k2 / t.k1) * t.s1 * t.s2 * t.c3 -
               (t.k3 / t.k1) * t.s1 * t.c2 * t.s3 - (t.k3 / t.k2) * t.c1 * t.s2 * t.s3 -
               2.0 * t.k3 * r * t.c1 * t.c2 * t.s3 - t.k2 * r * t.c1 * t.s2 * t.c3 +
               t.k2 * t.k3 * r * r * t.c1 * t.s2 * t.s3 +
               (t.k2 * t.k3 * r / t.k1) * t.s1 * t.s2 * t.s3;
    return {l11.real(), l12.real(), l21.real(), l22.real()};
}

/// mu = 2 asymptotics: everything expressed through sin/cos of sqrt(a_j)
/// with explicit eps powers attached to the gap terms.
inline Mat2 asym_mu2(std::span<const double> a, double eps, double tau, double k) {
    auto rt = [](double x) { return std::sqrt(cplx(x, 0.0)); };
    double et1 = std::pow(eps, tau - 1.0);
    if (a.size() == 2) {
        cplx r1 = rt(a[0]), r2 = rt(a[1]);
        cplx S1 = std::sin(r1), C1 = std::cos(r1), S2 = std::sin(r2), C2 = std::cos(r2);
        cplx l11 = C1 * C2 - (r1 / r2) * S1 * S2 - r1 * S1 * C2 * et1;
        cplx l22 = C1 * C2 - (r2 / r1) * S1 * S2 - r2 * C1 * S2 * et1;
        cplx l21 = -(r1 * S1 * C2 + r2 * C1 * S2) / eps +
                   r1 * r2 * S1 * S2 * std::pow(eps, tau - 2.0);
        return {l11.real(), 0.0, l21.real(), l22.real()};
    }
    cplx r1 = rt(a[0]), r2 = rt(a[1]), r3 = rt(a[2]);
    cplx S1 = std::sin(r1), C1 = std::cos(r1);
    cplx S2 = std::sin(r2), C2 = std::cos(r2);
    cplx S3 = std::sin(r3), C3 = std::cos(r3);
    double et2 = std::pow(eps, 2.0 * (tau - 1.0));
    cplx l11 = C1 * C2 * C3 - (r1 / r2) * S1 * S2 * C3 - (r1 / r3) * S1 * C2 * S3 -
               (r2 / r3) * C1 * S2 * S3 +
               ((r1 * r2 / r3) * S1 * S2 * S3 - 2.0 * r1 * S1 * C2 * C3 -
                r2 * C1 * S2 * C3) * et1 +
               r1 * r2 * S1 * S2 * C3 * et2;
    cplx l22 = C1 * C2 * C3 - (r2 / r1) * S1 * S2 * C3 - (r3 / r1) * S1 * C2 * S3 -
               (r3 / r2) * C1 * S2 * S3 +
               ((r2 * r3 / r1) * S1 * S2 * S3 - 2.0 * r3 * C1 * C2 * S3 -
                r2 * C1 * S2 * C3) * et1 +
               r2 * r3 * C1 * S2 * S3 * et2;
    cplx l21 = ((r1 * r3 / r2) * S1 * S2 * S3 - r1 * S1 * C2 * C3 - r2 * C1 * S2 * C3 -
                r3 * C1 * C2 * S3) / eps +
               (r1 * r2 * S1 * S2 * C3 + 2.0 * r1 * r3 * S1 * C2 * S3 +
                r2 * r3 * C1 * S2 * S3) * std::pow(eps, tau - 2.0) -
               r1 * r2 * r3 * S1 * S2 * S3 * std::pow(eps, 2.0 * tau - 3.0) +
               k * k * C2 * (r1 * S1 * C3 + r3 * C1 * S3) * std::pow(eps, 2.0 * tau - 1.0);
    cplx l12 = -r2 * S2 * std::pow(eps, 2.0 * tau - 1.0);
    return {l11.real(), l12.real(), l21.real(), l22.real()};
}

// --------------------------------------------------------- random draws

struct Sampler {
    std::mt19937_64 rng;

    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    double intensity(double mag = 10.0) {
        double v = uniform(0.1, mag);
        return (rng() & 1u) ? v : -v;
    }
    std::vector<double> intensities(std::size_t n, double mag = 10.0) {
        std::vector<double> a(n);
        for (auto& ai : a)
            ai = intensity(mag);
        return a;
    }
};

// ------------------------------------------------------- table witnesses

/// eps^(tau-2) coefficient of the three-delta off-diagonal asymptote.
inline double alpha_coefficient_n3(std::span<const double> a) {
    return a[0] * a[1] * sfun(a[0]) * sfun(a[1]) * cfun(a[2]) +
           2.0 * a[0] * a[2] * sfun(a[0]) * cfun(a[1]) * sfun(a[2]) +
           a[1] * a[2] * cfun(a[0]) * sfun(a[1]) * sfun(a[2]);
}

struct RowWitness {
    std::string row;
    std::vector<double> a;
    SqueezePath path;
    InteractionKind kind = InteractionKind::SeparatedDirichlet;
    double theta = std::numeric_limits<double>::quiet_NaN(); // checked when finite
    double alpha = std::numeric_limits<double>::quiet_NaN();
    int sign = 0; // checked when nonzero
    bool numeric_known_deviation = false;
    double numeric_rel_tol = 1e-3;
};

inline double first_root(SetId id, std::vector<double> partial, Interval window) {
    return solve_last(id, partial, window).front();
}

inline std::vector<RowWitness> table1_witnesses() {
    using IK = InteractionKind;
    const double pi = std::numbers::pi;
    const double q = pi * pi / 4.0; // first zero of cos(sqrt(a))
    std::vector<RowWitness> rows;
    auto add = [&](RowWitness w) { rows.push_back(std::move(w)); };

    // delta'-potentials
    add({"table1/delta-prime/1a-K2", {3.0, 1.5}, {4.0, 1.0}, IK::DeltaPrimePotential, -2.0});
    add({"table1/delta-prime/1a-K3", {4.0, 3.0, 2.5}, {4.0, 1.0}, IK::DeltaPrimePotential, 2.0});
    {
        RowWitness w{"table1/delta-prime/2a-K2", {3.0, 1.5}, {3.0, 1.0},
                     IK::DeltaPrimePotential, -2.0};
        w.numeric_known_deviation = true; // exact lambda21 limit is a nonzero constant
        add(w);
    }
    {
        RowWitness w{"table1/delta-prime/3a-K2", {3.0, 1.5}, {2.75, 1.0},
                     IK::DeltaPrimePotential, -2.0};
        w.numeric_known_deviation = true; // exact lambda21 diverges like eps^(mu-3)
        add(w);
    }
    {
        double a2 = first_root(SetId::F2, {1.0}, {0.3, 40.0});
        std::vector<double> a{1.0, a2};
        add({"table1/delta-prime/4a-F2", a, {2.0, 1.0}, IK::DeltaPrimePotential, theta_F(a)});
    }
    {
        double a3 = first_root(SetId::F3, {1.0, 2.0}, {0.3, 40.0});
        std::vector<double> a{1.0, 2.0, a3};
        add({"table1/delta-prime/4a-F3", a, {2.0, 1.0}, IK::DeltaPrimePotential, theta_F(a)});
    }
    {
        double a2 = first_root(SetId::G2, {2.0}, {2.5, 9.8});
        std::vector<double> a{2.0, a2};
        add({"table1/delta-prime/4d-G2", a, {2.0, 3.0}, IK::DeltaPrimePotential,
             theta_alpha_G(a, 'd').first});
    }
    {
        double a3 = first_root(SetId::G3, {1.0, 2.0}, {0.3, 40.0});
        std::vector<double> a{1.0, 2.0, a3};
        add({"table1/delta-prime/4d-G3", a, {2.0, 3.0}, IK::DeltaPrimePotential,
             theta_alpha_G(a, 'd').first});
    }

    // delta-potentials
    {
        RowWitness w{"table1/delta/1c-L2", {1.0, -1.0}, {4.0, 2.0}, IK::Delta};
        w.alpha = -1.0;
        add(w);
    }
    {
        RowWitness w{"table1/delta/1c-L3", {1.0, 2.0, -3.0}, {4.0, 2.0}, IK::Delta};
        w.alpha = -10.0; // a1a2 + 2a1a3 + a2a3
        add(w);
    }
    {
        RowWitness w{"table1/delta/2c-L2", {1.0, -1.0}, {3.0, 2.0}, IK::Delta};
        w.alpha = -1.0;
        w.numeric_known_deviation = true; // exact limit -5/3
        add(w);
    }
    {
        RowWitness w{"table1/delta/2c-L3", {1.0, 2.0, -3.0}, {3.0, 2.0}, IK::Delta};
        w.alpha = -13.0; // a1a2 + 3a1a3 + a2a3
        w.numeric_known_deviation = true; // exact limit -53/3
        add(w);
    }
    {
        RowWitness w{"table1/delta/2d-L3", {1.0, 2.0, -3.0}, {3.0, 3.0}, IK::Delta};
        w.alpha = -3.0; // a1a3
        w.numeric_known_deviation = true; // exact limit -23/3
        add(w);
    }
    {
        RowWitness w{"table1/delta/3c-L2", {1.0, -1.0}, {2.75, 2.0}, IK::Delta};
        w.alpha = -1.0;
        w.numeric_known_deviation = true; // exact lambda21 diverges like eps^(mu-3)
        add(w);
    }
    {
        RowWitness w{"table1/delta/4c-Q2", {q, q}, {2.0, 2.0}, IK::Delta};
        w.theta = -1.0;
        w.alpha = -q; // normalized strength theta*lambda21
        add(w);
    }
    {
        RowWitness w{"table1/delta/4c-Q3_3", {q, q, pi * pi}, {2.0, 2.0}, IK::Delta};
        w.theta = 1.0;
        w.alpha = -q;
        add(w);
    }
    {
        RowWitness w{"table1/delta/4c-Q3_2", {q, pi * pi, q}, {2.0, 2.0}, IK::Delta};
        w.theta = 1.0;
        w.alpha = -pi * pi / 2.0; // -2 sqrt(a1 a3)
        add(w);
    }
    {
        RowWitness w{"table1/delta/4c-Q3_1", {pi * pi, q, q}, {2.0, 2.0}, IK::Delta};
        w.theta = 1.0;
        w.alpha = -q;
        add(w);
    }
    {
        double a2 = 2.0;
        double a1 = symmetric_branch_a1(a2, SymBranch::ThetaPlus, {0.3, 30.0}).front();
        RowWitness w{"table1/delta/4c-sym", {a1, a2, a1}, {2.0, 2.0}, IK::Delta};
        w.theta = 1.0;
        w.alpha = -2.0 * a1 * a1 * sfun(a1) * sfun(a1); // -2 a1 sin^2 sqrt(a1)
        add(w);
    }

    // (delta' + delta)-potentials
    {
        RowWitness w{"table1/delta-prime-plus-delta/2a-K3", {4.0, 3.0, 2.5}, {3.0, 1.0},
                     IK::DeltaPrimePlusDelta, 2.0};
        w.alpha = 10.0; // a1a3
        w.numeric_known_deviation = true; // exact limit -31/3
        add(w);
    }
    {
        double a2 = first_root(SetId::G2, {2.0}, {2.5, 9.8});
        std::vector<double> a{2.0, a2};
        auto [th, al] = theta_alpha_G(a, 'c');
        RowWitness w{"table1/delta-prime-plus-delta/4c-G2", a, {2.0, 2.0},
                     IK::DeltaPrimePlusDelta, th};
        w.alpha = al;
        add(w);
    }
    {
        double a3 = first_root(SetId::G3, {1.0, 2.0}, {0.3, 40.0});
        std::vector<double> a{1.0, 2.0, a3};
        auto [th, al] = theta_alpha_G(a, 'c');
        RowWitness w{"table1/delta-prime-plus-delta/4c-G3", a, {2.0, 2.0},
                     IK::DeltaPrimePlusDelta, th};
        w.alpha = al;
        add(w);
    }

    // reflectionless potentials
    {
        RowWitness w{"table1/reflectionless/1a-K2", {2.0, 2.0}, {4.0, 1.0}, IK::Reflectionless};
        w.sign = -1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/1a-K3-symmetric", {2.0, 4.0, 2.0}, {4.0, 1.0},
                     IK::Reflectionless};
        w.sign = +1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/1a-K3-asymmetric", {3.0, 2.0, -1.0}, {4.0, 1.0},
                     IK::Reflectionless};
        w.sign = -1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/1d-L2", {1.0, -1.0}, {4.0, 3.0}, IK::Reflectionless};
        w.sign = +1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/1d-L3", {1.0, 2.0, -3.0}, {4.0, 3.0},
                     IK::Reflectionless};
        w.sign = +1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/2d-L2", {1.0, -1.0}, {3.0, 3.0}, IK::Reflectionless};
        w.sign = +1;
        w.numeric_known_deviation = true; // exact lambda21 limit -2/3
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/3d-L2", {1.0, -1.0}, {2.75, 3.0},
                     IK::Reflectionless};
        w.sign = +1;
        w.numeric_known_deviation = true; // exact lambda21 diverges like eps^(mu-3)
        add(w);
    }
    for (double tau : {1.0, 1.5, 2.0, 3.0}) {
        RowWitness w{"table1/reflectionless/4-P2-tau" + fmt(tau),
                     {pi * pi, 4.0 * pi * pi}, {2.0, tau}, IK::Reflectionless};
        w.sign = -1; // (-1)^(1+2)
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/4c-P3", {pi * pi, 4.0 * pi * pi, 9.0 * pi * pi},
                     {2.0, 2.0}, IK::Reflectionless};
        w.sign = +1; // (-1)^(1+2+3)
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/4d-Q2", {q, q}, {2.0, 3.0}, IK::Reflectionless};
        w.sign = -1;
        add(w);
    }
    {
        RowWitness w{"table1/reflectionless/4d-Q3_1", {pi * pi, q, q}, {2.0, 3.0},
                     IK::Reflectionless};
        w.sign = +1;
        add(w);
    }
    {
        double a2 = 2.0;
        double a1 = symmetric_branch_a1(a2, SymBranch::ThetaMinus, {0.3, 30.0}).front();
        RowWitness w{"table1/reflectionless/4d-sym", {a1, a2, a1}, {2.0, 3.0},
                     IK::Reflectionless};
        w.sign = -1;
        add(w);
    }
    return rows;
}

struct DirichletWitness {
    std::string row;
    std::vector<double> a;
    SqueezePath path;
};

inline std::vector<DirichletWitness> table2_witnesses() {
    std::vector<DirichletWitness> rows;
    double g2_root = first_root(SetId::G2, {2.0}, {2.5, 9.8});
    rows.push_back({"table2/1a-2a-N2", {1.0, 1.0}, {4.0, 1.0}});
    rows.push_back({"table2/1a-2a-N3", {1.0, 1.0, 2.0}, {3.0, 1.0}});
    rows.push_back({"table2/1b-2b-3b-N2", {1.0, 1.0}, {4.0, 1.5}});
    rows.push_back({"table2/1b-2b-3b-N3", {1.0, 1.0, 1.0}, {3.0, 1.5}});
    rows.push_back({"table2/1c-1d-2c-2d-N2", {1.0, 1.0}, {4.0, 2.0}});
    rows.push_back({"table2/1c-1d-2c-2d-N3", {1.0, 1.0, 1.0}, {3.0, 3.0}});
    rows.push_back({"table2/3a-N2", {1.0, 1.0}, {2.75, 1.0}});
    rows.push_back({"table2/3a-N3-on-K3", {4.0, 3.0, 2.5}, {2.75, 1.0}});
    rows.push_back({"table2/3c-3d-N2", {1.0, 1.0}, {2.75, 2.0}});
    rows.push_back({"table2/3c-3d-N3-on-L3", {1.0, 2.0, -3.0}, {2.75, 2.0}});
    rows.push_back({"table2/4a-N2", {1.0, 1.0}, {2.0, 1.0}});
    rows.push_back({"table2/4a-N3", {1.0, 1.0, 1.0}, {2.0, 1.0}});
    rows.push_back({"table2/4b-N2", {1.0, 1.0}, {2.0, 1.5}});
    rows.push_back({"table2/4b-N2-on-G2", {2.0, g2_root}, {2.0, 1.5}});
    rows.push_back({"table2/4c-4d-N2", {1.0, 1.0}, {2.0, 2.0}});
    rows.push_back({"table2/4c-4d-N3", {1.0, 1.0, 1.0}, {2.0, 3.0}});
    return rows;
}

// --------------------------------------------------------- check groups

inline void check_entire(Checker& ck) {
    // relative to the dominant term: cosh^2 - sinh^2 cancels through 1e8
    // at a = -100, so an absolute bound has no meaning there
    double worst_pyth = 0.0, worst_quot = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double a = -100.0 + i * 0.01;
        double c = cfun(a), s = sfun(a);
        double scale = std::max(1.0, c * c);
        worst_pyth = std::max(worst_pyth, std::abs(c * c + a * s * s - 1.0) / scale);
        if (std::abs(c) > 1e-6) {
            double u = sfun(a) / c;
            worst_quot = std::max(worst_quot, std::abs(u * c - s));
        }
    }
    ck.bound("entire/pythagorean-identity", worst_pyth, 1e-12);
    ck.bound("entire/ufun-times-cfun", worst_quot, 1e-12);

    // series evaluation vs direct trig on both sides of the switchover
    double worst_branch = 0.0;
    for (int i = 0; i <= 400; ++i) {
        double mag = std::pow(10.0, -5.0 + 2.0 * i / 400.0); // 1e-5 .. 1e-3
        for (double a : {mag, -mag}) {
            double series_c = 1.0, term = 1.0;
            double series_s = 1.0, term_s = 1.0;
            for (int n = 1; n <= 8; ++n) {
                term *= -a / ((2 * n - 1) * (2 * n));
                series_c += term;
                term_s *= -a / ((2 * n) * (2 * n + 1));
                series_s += term_s;
            }
            double closed_c = a > 0 ? std::cos(std::sqrt(a)) : std::cosh(std::sqrt(-a));
            double closed_s = a > 0 ? std::sin(std::sqrt(a)) / std::sqrt(a)
                                    : std::sinh(std::sqrt(-a)) / std::sqrt(-a);
            worst_branch = std::max({worst_branch, std::abs(series_c - closed_c),
                                     std::abs(series_s - closed_s), std::abs(cfun(a) - closed_c),
                                     std::abs(sfun(a) - series_s)});
        }
    }
    ck.bound("entire/series-closed-agreement", worst_branch, 1e-12);
}

inline RegularizedSystem random_system(Sampler& smp, std::size_t n) {
    RegularizedSystem sys;
    sys.intensities = smp.intensities(n);
    sys.eps = smp.log_uniform(1e-6, 1.0);
    double mu = smp.uniform(2.0, 8.0);
    double tau = smp.uniform(1.0, 5.0);
    if (smp.uniform(0, 1) < 0.1)
        mu = std::numeric_limits<double>::infinity();
    if (smp.uniform(0, 1) < 0.1)
        tau = std::numeric_limits<double>::infinity();
    sys.l = width_at(sys.eps, mu);
    sys.r = gap_at(sys.eps, tau);
    sys.k = smp.log_uniform(0.1, 10.0);
    return sys;
}

inline void check_transfer(Checker& ck) {
    Sampler smp(0x5eed0001);
    double worst_det = 0.0;
    for (int i = 0; i < 10000; ++i) {
        auto sys = random_system(smp, 1 + static_cast<std::size_t>(i % 3));
        worst_det = std::max(worst_det, std::abs(stack_matrix_with_error(sys).det - 1.0));
    }
    ck.bound("transfer/wronskian-10k-draws", worst_det, 1e-10);

    double worst_mirror = 0.0;
    for (int i = 0; i < 500; ++i) {
        auto sys = random_system(smp, 3);
        sys.intensities[2] = sys.intensities[0];
        Mat2 m = stack_matrix(sys);
        worst_mirror = std::max(worst_mirror, std::abs(m.m11 - m.m22));
    }
    ck.bound("transfer/mirror-symmetry", worst_mirror, 1e-10);

    double worst_comp = 0.0;
    for (int i = 0; i < 500; ++i) {
        auto sys = random_system(smp, 3);
        Mat2 whole = stack_matrix(sys);
        RegularizedSystem head = sys;
        head.intensities.pop_back();
        Mat2 tail = sys.l == 0.0 ? delta_matrix(sys.intensities[2], sys.eps)
                                 : layer_matrix(sys.intensities[2], sys.eps, sys.l, sys.k);
        Mat2 composed = tail * (gap_matrix(sys.r, sys.k) * stack_matrix(head));
        double scale = std::max(1.0, whole.max_abs());
        for (int e = 0; e < 4; ++e)
            worst_comp = std::max(worst_comp, std::abs(whole.elements()[e] -
                                                       composed.elements()[e]) / scale);
    }
    ck.bound("transfer/composition", worst_comp, 1e-12);

    // exact minus reference asymptote shrinks with a positive fitted order
    auto decay_order = [&](std::span<const double> a, double mu, double tau, double k,
                           auto&& reference) {
        std::vector<double> eps_grid, resid;
        for (int i = 0; i <= 16; ++i) {
            double eps = std::pow(10.0, -2.0 - 0.25 * i); // 1e-2 .. 1e-6
            SqueezePath path{mu, tau};
            Mat2 exact = matrix_at(a, path, k, eps);
            Mat2 ref = reference(a, eps, mu, tau, k);
            double r = 0.0;
            for (int e = 0; e < 4; ++e)
                r = std::max(r, std::abs(exact.elements()[e] - ref.elements()[e]));
            eps_grid.push_back(eps);
            resid.push_back(r);
        }
        return power_law_fit(eps_grid, resid);
    };
    std::array<double, 2> a2{1.3, -0.7};
    std::array<double, 3> a3{1.3, -0.7, 2.1};
    PowerFit f2 = decay_order(a2, 3.5, 1.3, 1.1, [](auto a, double e, double m, double t,
                                                    double k) { return asym_mu_gt2_n2(a, e, m, t, k); });
    ck.flag("transfer/asymptote-decay-n2", f2.slope > 0.2,
            "fitted order " + fmt(f2.slope) + " (r2 " + fmt(f2.r2) + ")");
    PowerFit f3 = decay_order(a3, 3.5, 1.3, 1.1, [](auto a, double e, double m, double t,
                                                    double k) { return asym_mu_gt2_n3(a, e, m, t, k); });
    ck.flag("transfer/asymptote-decay-n3", f3.slope > 0.2,
            "fitted order " + fmt(f3.slope) + " (r2 " + fmt(f3.r2) + ")");
    auto mu2ref = [](auto a, double e, double, double t, double k) { return asym_mu2(a, e, t, k); };
    PowerFit g2 = decay_order(a2, 2.0, 1.5, 1.1, mu2ref);
    ck.flag("transfer/asymptote-decay-mu2-n2", g2.slope > 0.2,
            "fitted order " + fmt(g2.slope) + " (r2 " + fmt(g2.r2) + ")");
    PowerFit g3 = decay_order(a3, 2.0, 1.5, 1.1, mu2ref);
    ck.flag("transfer/asymptote-decay-mu2-n3", g3.slope > 0.2,
            "fitted order " + fmt(g3.slope) + " (r2 " + fmt(g3.r2) + ")");
}

inline void check_paths(Checker& ck) {
    struct Case {
        double mu, tau;
        const char* label;
    };
    const double inf = std::numeric_limits<double>::infinity();
    const Case cases[] = {
        {inf, 1.0, "1a"}, {5.0, 1.5, "1b"}, {4.0, 2.0, "1c"}, {3.5, inf, "1d"},
        {3.0, 1.0, "2a"}, {3.0, 1.7, "2b"}, {3.0, 2.0, "2c"}, {3.0, 4.0, "2d"},
        {2.5, 1.0, "3a"}, {2.2, 1.2, "3b"}, {2.9, 2.0, "3c"}, {2.5, 2.5, "3d"},
        {2.0, 1.0, "4a"}, {2.0, 1.5, "4b"}, {2.0, 2.0, "4c"}, {2.0, inf, "4d"},
    };
    bool label_ok = true;
    std::string bad;
    for (const auto& c : cases) {
        if (path_family(c.mu, c.tau).str() != c.label) {
            label_ok = false;
            bad = c.label;
        }
    }
    ck.flag("paths/family-labels", label_ok,
            label_ok ? "all 16 family/branch cells match" : "mismatch at " + bad);

    // off-resonance m21 divergence is the 1/eps leading term; the draws
    // stay well away from every resonance set so the subleading
    // eps^(mu-3) pieces cannot contaminate the fit window
    Sampler smp(0x5eed0002);
    auto fit_seq = eps_sequence(1e-5, std::pow(10.0, -0.5), 9); // 1e-5 .. 1e-9
    auto off_all_sets = [&](std::size_t n) {
        for (;;) {
            auto a = smp.intensities(n, 2.5);
            bool ok = true;
            if (n == 2) {
                for (SetId id : {SetId::K2, SetId::L2, SetId::F2, SetId::G2})
                    ok = ok && std::abs(residual(id, a)) > 1.0;
            } else {
                for (SetId id : {SetId::K3, SetId::L3, SetId::F3, SetId::G3})
                    ok = ok && std::abs(residual(id, a)) > 1.0;
            }
            if (ok)
                return a;
        }
    };
    double worst_m21 = 0.0, worst_m12 = 10.0;
    for (double mu : {2.0, 2.5, 3.0, 4.0}) {
        for (double tau : {1.0, 1.5, 2.0, 3.0}) {
            for (std::size_t n : {2u, 3u}) {
                auto a = off_all_sets(n);
                auto trace = evaluate_along_path(a, {mu, tau}, 1.0, fit_seq);
                std::vector<double> m21(trace.eps.size()), m12(trace.eps.size());
                for (std::size_t i = 0; i < trace.eps.size(); ++i) {
                    m21[i] = trace.matrices[i].m21;
                    m12[i] = trace.matrices[i].m12;
                }
                worst_m21 = std::max(worst_m21,
                                     std::abs(power_law_fit(trace.eps, m21).slope + 1.0));
                double m12_slope = power_law_fit(trace.eps, m12).slope;
                worst_m12 = std::min(worst_m12, m12_slope - std::min(2.0 * tau - 1.0, 1.0));
            }
        }
    }
    ck.bound("paths/m21-exponent-minus-one", worst_m21, 0.05);
    ck.flag("paths/m12-decay-order", worst_m12 > -0.05,
            "worst margin " + fmt(worst_m12) + " vs min(2*tau-1, 1)");

    // limit estimates must not depend on the probe wavenumber
    double worst_k = 0.0;
    using KSetup = std::pair<std::vector<double>, SqueezePath>;
    for (const auto& setup : {KSetup{{3.0, 1.5}, {4.0, 1.0}}, KSetup{{1.0, -1.0}, {4.0, 2.0}}}) {
        auto seq = eps_sequence(1e-2, std::pow(10.0, -0.5), 9);
        auto est_a = estimate_limit(evaluate_along_path(setup.first, setup.second, 0.5, seq));
        auto est_b = estimate_limit(evaluate_along_path(setup.first, setup.second, 2.0, seq));
        for (int e = 0; e < 4; ++e) {
            const auto& ea = est_a.element(e);
            const auto& eb = est_b.element(e);
            if (ea.converged() && eb.converged()) {
                double allowed = 10.0 * (ea.uncertainty + eb.uncertainty) + 1e-12;
                worst_k = std::max(worst_k, std::abs(ea.value - eb.value) / allowed);
            }
        }
    }
    ck.bound("paths/k-independence", worst_k, 1.0);
}

inline void check_resonance(Checker& ck) {
    // solver residuals, re-evaluated through the cleared forms
    double worst_res = 0.0, worst_k2id = 0.0;
    for (int i = 0; i <= 40; ++i) {
        double a1 = 1.2 + 0.27 * i;
        double a2 = solve_last(SetId::K2, std::array{a1}, {-1e9, 1e9}).front();
        worst_res = std::max(worst_res, std::abs(residual(SetId::K2, std::array{a1, a2})));
        worst_k2id = std::max(worst_k2id, std::abs((1.0 - a1) * (1.0 - a2) - 1.0));
        double l2 = solve_last(SetId::L2, std::array{a1}, {-1e9, 1e9}).front();
        worst_res = std::max(worst_res, std::abs(residual(SetId::L2, std::array{a1, l2})));
        double a3k = solve_last(SetId::K3, std::array{a1, 0.8}, {-1e9, 1e9}).front();
        worst_res = std::max(worst_res, std::abs(residual(SetId::K3, std::array{a1, 0.8, a3k})));
        double a3l = solve_last(SetId::L3, std::array{a1, 0.8}, {-1e9, 1e9}).front();
        worst_res = std::max(worst_res, std::abs(residual(SetId::L3, std::array{a1, 0.8, a3l})));
    }
    for (int i = 0; i < 25; ++i) {
        double a1 = 0.7 + 1.5 * i;
        for (double root : solve_last(SetId::F2, std::array{a1}, {0.3, 45.0}))
            worst_res = std::max(worst_res, std::abs(residual(SetId::F2, std::array{a1, root})));
        for (double root : solve_last(SetId::G2, std::array{a1}, {0.3, 45.0}))
            worst_res = std::max(worst_res, std::abs(residual(SetId::G2, std::array{a1, root})));
        for (double root : solve_last(SetId::F3, std::array{a1, 2.0}, {0.3, 45.0}))
            worst_res = std::max(worst_res,
                                 std::abs(residual(SetId::F3, std::array{a1, 2.0, root})));
        for (double root : solve_last(SetId::G3, std::array{a1, 2.0}, {0.3, 45.0}))
            worst_res = std::max(worst_res,
                                 std::abs(residual(SetId::G3, std::array{a1, 2.0, root})));
    }
    ck.bound("resonance/solver-residuals", worst_res, 1e-9);
    ck.bound("resonance/k2-theta-rho-identity", worst_k2id, 1e-12);

    // cleared and tan forms agree away from the poles
    Sampler smp(0x5eed0003);
    double worst_equiv = 0.0;
    for (int i = 0; i < 1000; ++i) {
        auto draw = [&](std::size_t n) {
            std::vector<double> a;
            while (a.size() < n) {
                double v = smp.uniform(-30.0, 30.0);
                if (std::abs(v) > 0.05 && std::abs(cfun(v)) > 0.1)
                    a.push_back(v);
            }
            return a;
        };
        auto a2 = draw(2);
        auto a3 = draw(3);
        double cprod2 = cfun(a2[0]) * cfun(a2[1]);
        double cprod3 = cfun(a3[0]) * cfun(a3[1]) * cfun(a3[2]);
        for (SetId id : {SetId::F2, SetId::G2}) {
            double tan = tan_form_residual(id, a2);
            worst_equiv = std::max(worst_equiv, std::abs(residual(id, a2) / cprod2 - tan) /
                                                    (1.0 + std::abs(tan)));
        }
        for (SetId id : {SetId::F3, SetId::G3}) {
            double tan = tan_form_residual(id, a3);
            worst_equiv = std::max(worst_equiv, std::abs(residual(id, a3) / cprod3 - tan) /
                                                    (1.0 + std::abs(tan)));
        }
    }
    ck.bound("resonance/cleared-vs-tan-equivalence", worst_equiv, 1e-9);

    // P points kill every divergent coefficient term by term
    const double pi = std::numbers::pi;
    std::array<double, 2> p2{pi * pi, 4.0 * pi * pi};
    std::array<double, 3> p3{pi * pi, 4.0 * pi * pi, 9.0 * pi * pi};
    double worst_p = std::max({std::abs(residual(SetId::F2, p2)),
                               std::abs(residual(SetId::G2, p2)),
                               std::abs(p2[0] * p2[1] * sfun(p2[0]) * sfun(p2[1])),
                               std::abs(residual(SetId::F3, p3)),
                               std::abs(residual(SetId::G3, p3)),
                               std::abs(alpha_coefficient_n3(p3)),
                               std::abs(p3[0] * p3[1] * p3[2] * sfun(p3[0]) * sfun(p3[1]) *
                                        sfun(p3[2]))});
    ck.bound("resonance/p-points-termwise", worst_p, 1e-12);

    // branch continuity and multiplicity of the traced families
    auto check_branches = [&](SetId id, const char* name) {
        int samples = 160;
        Interval range{0.3, 40.0};
        auto branches = trace_curve(id, range, samples, {0.3, 60.0});
        double step = range.width() / (samples - 1);
        bool continuous = true;
        double worst_r = 0.0;
        std::size_t points = 0;
        for (const auto& br : branches) {
            for (std::size_t i = 0; i < br.points.size(); ++i) {
                ++points;
                std::array<double, 2> pt{br.points[i][0], br.points[i][1]};
                worst_r = std::max(worst_r, std::abs(residual(id, pt)));
                if (i > 0 && std::abs(br.points[i][1] - br.points[i - 1][1]) >= 5.0 * step)
                    continuous = false;
            }
        }
        ck.flag(std::string("resonance/") + name + "-branches", branches.size() >= 2 &&
                    continuous && worst_r <= 1e-9 * ck.tol_scale && points > 100,
                std::to_string(branches.size()) + " branches, " + std::to_string(points) +
                    " points, worst residual " + fmt(worst_r));
    };
    check_branches(SetId::F2, "f2");
    check_branches(SetId::G2, "g2");
}

inline void check_classify_core(Checker& ck) {
    // theta * rho = 1 on the K sets
    double worst_tr = 0.0;
    for (int i = 0; i <= 30; ++i) {
        double a1 = -6.0 + 0.45 * i;
        if (std::abs(a1) < 0.2 || std::abs(a1 - 1.0) < 0.2)
            continue;
        double a2 = solve_last(SetId::K2, std::array{a1}, {-1e9, 1e9}).front();
        if (std::abs(a2) < 1e-6)
            continue;
        std::array<double, 2> a{a1, a2};
        worst_tr = std::max(worst_tr, std::abs(theta_K(a) * rho_K(a) - 1.0));
        double den = 1.0 - 2.0 * a1 - 0.8 + a1 * 0.8;
        if (std::abs(den) > 0.2) {
            double a3 = solve_last(SetId::K3, std::array{a1, 0.8}, {-1e9, 1e9}).front();
            if (std::abs(a3) > 1e-6) {
                std::array<double, 3> b{a1, 0.8, a3};
                worst_tr = std::max(worst_tr, std::abs(theta_K(b) * rho_K(b) - 1.0));
            }
        }
    }
    ck.bound("classify/theta-rho-identity", worst_tr, 1e-12);

    // lambda11 * lambda22 = 1 across traced F and G roots, dual forms agree
    double worst_f = 0.0, worst_g = 0.0, worst_dual = 0.0;
    int f_roots = 0, g_roots = 0;
    for (int i = 0; i < 110 && (f_roots < 100 || g_roots < 100); ++i) {
        double a1 = 0.4 + 0.35 * i;
        try {
            for (double root : solve_last(SetId::F2, std::array{a1}, {0.3, 45.0})) {
                std::array<double, 2> a{a1, root};
                worst_f = std::max(worst_f, std::abs(lambda11_F(a) * lambda22_F(a) - 1.0));
                auto forms = squeeze::detail::lambda11_F_forms(a);
                if (std::abs(forms.den_a) > 1e-4 && std::abs(forms.den_b) > 1e-4)
                    worst_dual = std::max(worst_dual,
                                          std::abs(forms.num_a / forms.den_a -
                                                   forms.num_b / forms.den_b));
                ++f_roots;
            }
        } catch (const NoRootInInterval&) {
        }
        try {
            for (double root : solve_last(SetId::G2, std::array{a1}, {0.3, 45.0})) {
                std::array<double, 2> a{a1, root};
                worst_g = std::max(worst_g, std::abs(lambda11_G(a) * lambda22_G(a) - 1.0));
                ++g_roots;
            }
        } catch (const NoRootInInterval&) {
        }
    }
    for (int i = 0; i < 40; ++i) {
        double a1 = 0.6 + 0.9 * i;
        try {
            for (double root : solve_last(SetId::F3, std::array{a1, 2.0}, {0.3, 45.0})) {
                std::array<double, 3> a{a1, 2.0, root};
                worst_f = std::max(worst_f, std::abs(lambda11_F(a) * lambda22_F(a) - 1.0));
            }
            for (double root : solve_last(SetId::G3, std::array{a1, 2.0}, {0.3, 45.0})) {
                std::array<double, 3> a{a1, 2.0, root};
                worst_g = std::max(worst_g, std::abs(lambda11_G(a) * lambda22_G(a) - 1.0));
            }
        } catch (const NoRootInInterval&) {
        }
    }
    ck.bound("classify/f-lambda-product", worst_f, 1e-9);
    ck.bound("classify/g-lambda-product", worst_g, 1e-9);
    ck.bound("classify/f-dual-form-agreement", worst_dual, 1e-9);

    // gamma parameterization lands on K2/K3 and reproduces theta
    double worst_gk = 0.0;
    for (double eta : {0.0, 0.25, 0.5, 1.0}) {
        for (double gamma : {-3.0, -1.2, -0.4, 0.7, 1.0, 2.5}) {
            if (std::abs(1.0 - eta * gamma) < 0.05 || std::abs(1.0 + (1.0 - eta) * gamma) < 0.05)
                continue;
            auto p2 = k2_point_from_gamma(gamma, eta);
            if (std::abs(p2[0]) < 1e-9 || std::abs(p2[1]) < 1e-9)
                continue;
            worst_gk = std::max(worst_gk, std::abs(residual(SetId::K2, p2)));
            worst_gk = std::max(worst_gk,
                                std::abs(theta_K(p2) - gamma_to_theta(gamma, eta)));
            worst_gk = std::max(worst_gk,
                                std::abs(theta_to_gamma(gamma_to_theta(gamma, eta), eta) - gamma));
            for (double a2 : {-1.0, 3.0, 4.5}) {
                auto p3 = k3_point_from_gamma(a2, gamma, eta);
                if (std::abs(p3[0]) < 1e-9 || std::abs(p3[2]) < 1e-9)
                    continue;
                worst_gk = std::max(worst_gk, std::abs(residual(SetId::K3, p3)));
                worst_gk = std::max(worst_gk,
                                    std::abs(theta_K(p3) - gamma_to_theta(gamma, eta)));
            }
        }
    }
    ck.bound("classify/gamma-parameterization", worst_gk, 1e-11);

    // symmetric N=3 branch: residual, theta = +-1, alpha formula
    double worst_sym = 0.0;
    int sym_count = 0;
    for (double a2 : {-2.0, 0.8, 2.0, 3.5, 6.0, 12.0}) {
        for (SymBranch br : {SymBranch::ThetaPlus, SymBranch::ThetaMinus}) {
            std::vector<double> roots;
            try {
                roots = symmetric_branch_a1(a2, br, {0.3, 30.0});
            } catch (const NoRoot&) {
                continue;
            }
            for (double a1 : roots) {
                std::array<double, 3> a{a1, a2, a1};
                worst_sym = std::max(worst_sym, std::abs(residual(SetId::G3, a)));
                auto [th, al] = theta_alpha_G(a, 'c');
                double expect_th = br == SymBranch::ThetaPlus ? 1.0 : -1.0;
                double expect_al = -expect_th * 2.0 * a1 * a1 * sfun(a1) * sfun(a1);
                worst_sym = std::max({worst_sym, std::abs(th - expect_th),
                                      std::abs(al - expect_al)});
                ++sym_count;
            }
        }
    }
    ck.flag("classify/symmetric-branch", sym_count >= 20 && worst_sym <= 1e-9 * ck.tol_scale,
            std::to_string(sym_count) + " roots, worst deviation " + fmt(worst_sym));
}

inline void check_tables(Checker& ck) {
    auto seq = eps_sequence(1e-2, std::pow(10.0, -0.5), 9); // down to 1e-6

    for (const auto& row : table1_witnesses()) {
        LimitInteraction li;
        bool cls_ok = false;
        std::string cls_detail;
        try {
            li = classify(row.a, row.path);
            cls_ok = li.kind == row.kind;
            if (cls_ok && std::isfinite(row.theta))
                cls_ok = std::abs(li.theta - row.theta) <= 1e-9;
            if (cls_ok && std::isfinite(row.alpha))
                cls_ok = std::abs(li.alpha - row.alpha) <= 1e-9;
            if (cls_ok && row.sign != 0)
                cls_ok = li.sign == row.sign;
            cls_detail = "kind " + li.kind_name() +
                         (std::isfinite(li.theta) ? ", theta " + fmt(li.theta) : "") +
                         (std::isfinite(li.alpha) ? ", alpha " + fmt(li.alpha) : "");
        } catch (const std::exception& e) {
            cls_detail = std::string("exception: ") + e.what();
        }
        ck.flag(row.row + "/classification", cls_ok, cls_detail);
        if (!cls_ok)
            continue;

        Mat2 expect = li.matrix();
        auto est = estimate_limit(evaluate_along_path(row.a, row.path, 1.0, seq));
        double worst = 0.0;
        bool settled = true;
        std::string note;
        for (int e = 0; e < 4; ++e) {
            const auto& el = est.element(e);
            if (!el.converged()) {
                settled = false;
                note = "element " + std::to_string(e) + " diverges (fitted exponent " +
                       fmt(el.exponent) + ")";
                continue;
            }
            worst = std::max(worst, std::abs(el.value - expect.elements()[e]));
        }
        double tol = row.numeric_rel_tol * std::max(1.0, expect.max_abs()) * ck.tol_scale;
        bool num_ok = settled && worst <= tol;
        std::string detail = settled ? "max element deviation " + fmt(worst) + " vs tol " + fmt(tol)
                                     : note;
        if (row.numeric_known_deviation && !num_ok)
            detail += "; exact squeezing limit differs from the tabulated closed form "
                      "(layer-width corrections at order eps^(mu-3))";
        ck.flag(row.row + "/numeric-limit", num_ok, detail, row.numeric_known_deviation);
    }

    auto fit_seq = eps_sequence(1e-3, std::pow(10.0, -0.5), 11);
    for (const auto& row : table2_witnesses()) {
        LimitInteraction li;
        bool cls_ok = false;
        std::string detail;
        try {
            li = classify(row.a, row.path);
            cls_ok = li.kind == InteractionKind::SeparatedDirichlet;
            detail = "kind " + li.kind_name();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        bool divergent = false;
        double slope = 0.0;
        if (cls_ok) {
            auto trace = evaluate_along_path(row.a, row.path, 1.0, fit_seq);
            std::vector<double> m21(trace.eps.size());
            for (std::size_t i = 0; i < trace.eps.size(); ++i)
                m21[i] = trace.matrices[i].m21;
            slope = power_law_fit(trace.eps, m21).slope;
            divergent = slope <= -0.2;
            detail += ", m21 exponent " + fmt(slope);
        }
        ck.flag(row.row, cls_ok && divergent, detail);
    }
}

inline void check_scattering(Checker& ck) {
    Sampler smp(0x5eed0004);
    double worst_unitarity = 0.0;
    for (int i = 0; i < 3000; ++i) {
        auto sys = random_system(smp, 2 + static_cast<std::size_t>(i % 2));
        ScatteringResult s = scatter(stack_matrix(sys), sys.k);
        worst_unitarity = std::max(worst_unitarity, std::abs(s.T + s.R - 1.0));
    }
    ck.bound("scattering/unitarity", worst_unitarity, 1e-10);

    double worst_var = 0.0;
    for (double theta : {-3.0, -1.5, 0.4, 2.0, 7.5}) {
        LimitInteraction li;
        li.kind = InteractionKind::DeltaPrimePotential;
        li.theta = theta;
        double t_min = 2.0, t_max = -1.0;
        for (int i = 0; i <= 50; ++i) {
            double k = 0.1 + (10.0 - 0.1) * i / 50.0;
            double T = scatter_limit(li, k).T;
            t_min = std::min(t_min, T);
            t_max = std::max(t_max, T);
        }
        worst_var = std::max(worst_var, t_max - t_min);
    }
    ck.bound("scattering/diagonal-k-independence", worst_var, 1e-12);

    // finite-eps transmission approaches the limit value
    std::array<double, 2> k2pt{3.0, 1.5};
    for (double mu : {4.0, 3.0}) {
        SqueezePath path{mu, 1.0};
        double T_lim = scatter_limit(classify(k2pt, path), 1.0).T;
        double T_eps = scatter(matrix_at(k2pt, path, 1.0, 1e-5), 1.0).T;
        bool known = mu == 3.0; // exact lambda21 limit shifts T on this path
        ck.bound("scattering/finite-eps-limit-mu" + fmt(mu), std::abs(T_eps - T_lim), 1e-2,
                 known,
                 "exact squeezing limit differs from the tabulated closed form at mu = 3");
    }
}

} // namespace detail

inline Report run(const Options& opt = {}) {
    auto start = std::chrono::steady_clock::now();
    detail::Checker ck;
    ck.tol_scale = opt.tol_scale;
    detail::check_entire(ck);
    detail::check_transfer(ck);
    detail::check_paths(ck);
    detail::check_resonance(ck);
    detail::check_classify_core(ck);
    detail::check_tables(ck);
    detail::check_scattering(ck);
    Report rep;
    rep.checks = std::move(ck.out);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace squeeze::verify
