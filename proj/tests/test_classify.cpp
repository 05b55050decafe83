#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "squeeze/classify.hpp"

using namespace squeeze;
namespace nb = std::numbers;

TEST_CASE("theta on the K sets") {
    CHECK(theta_K(std::array{2.0, 2.0}) == -1.0);
    std::array<double, 2> a{3.0, 1.5};
    CHECK(theta_K(a) == -2.0);
    CHECK(rho_K(a) == -0.5);
    CHECK(theta_K(a) * rho_K(a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)theta_K(std::array{3.0, 3.0}), OffSet);
}

TEST_CASE("gamma maps and the K parameterizations") {
    CHECK(gamma_to_theta(0.0, 0.5) == 1.0);
    CHECK(gamma_to_theta(1.0, 0.0) == 2.0);
    CHECK(theta_to_gamma(2.0, 0.0) == 1.0);
    CHECK_THROWS_AS((void)k2_point_from_gamma(2.0, 0.5), DivisionByZero);

    // eta = 0, gamma = 1, a2 = 3 lands on K3 at (4, 3, 2.5) with theta = 2
    auto p3 = k3_point_from_gamma(3.0, 1.0, 0.0);
    CHECK(p3[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p3[2] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(std::abs(residual(SetId::K3, p3)) < 1e-12);
    CHECK(theta_K(p3) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(theta_K(p3) * rho_K(p3) == doctest::Approx(1.0).epsilon(1e-14));

    // round trip through (b2) and back, K2 residual exactly on the set
    for (double eta : {0.0, 0.25, 0.5, 1.0})
        for (double gamma : {-2.0, -0.5, 0.3, 1.7}) {
            if (std::abs(1.0 - eta * gamma) < 0.05 ||
                std::abs(1.0 + (1.0 - eta) * gamma) < 0.05)
                continue;
            auto p2 = k2_point_from_gamma(gamma, eta);
            CHECK(std::abs(residual(SetId::K2, p2)) < 1e-12);
            double th = gamma_to_theta(gamma, eta);
            CHECK(theta_K(p2) == doctest::Approx(th).epsilon(1e-12));
            CHECK(theta_to_gamma(th, eta) == doctest::Approx(gamma).epsilon(1e-12));
        }
}

TEST_CASE("theta_F dual representations") {
    double a2 = solve_last(SetId::F2, std::array{1.0}, {0.3, 40.0}).front();
    std::array<double, 2> a{1.0, a2};
    double th = theta_F(a);
    CHECK(th == doctest::Approx(lambda11_F(a)).epsilon(1e-14));
    CHECK(lambda11_F(a) * lambda22_F(a) == doctest::Approx(1.0).epsilon(1e-10));

    // at the P2 corner the sin-based representation is 0/0 while the
    // cosine one stays conditioned and lands exactly on the parity sign
    std::array<double, 2> p2{nb::pi * nb::pi, 4.0 * nb::pi * nb::pi};
    CHECK(theta_F(p2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p_subset_sign(p2) == -1);
    CHECK(theta_F(p2) == doctest::Approx(double(p_subset_sign(p2))).epsilon(1e-12));
    CHECK(p_subset_sign(std::array{nb::pi * nb::pi, 4.0 * nb::pi * nb::pi, 9.0 * nb::pi * nb::pi}) ==
          1);
}

TEST_CASE("theta and alpha on the G sets") {
    double q = nb::pi * nb::pi / 4.0;
    auto [th_eq, al_eq] = theta_alpha_G(std::array{q, q}, 'c');
    CHECK(th_eq == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(al_eq == doctest::Approx(q).epsilon(1e-12)); // +sqrt(a1 a2)

    auto [th_13, al_13] = theta_alpha_G(std::array{q, 9.0 * q}, 'c');
    CHECK(th_13 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(al_13 == doctest::Approx(-3.0 * nb::pi * nb::pi / 4.0).epsilon(1e-12));

    auto [th_d, al_d] = theta_alpha_G(std::array{q, q}, 'd');
    CHECK(th_d == doctest::Approx(-1.0));
    CHECK(al_d == 0.0);

    CHECK_THROWS_AS(theta_alpha_G(std::array{1.0, 1.0}, 'c'), OffSet);
    CHECK_THROWS_AS(theta_alpha_G(std::array{q, q}, 'a'), std::invalid_argument);
}

TEST_CASE("symmetric three-delta branch") {
    // rhs pole: ThetaPlus needs tan(sqrt(a2)/2) finite and ThetaMinus
    // nonzero; at a2 = pi^2 the plus branch rhs blows up
    CHECK_THROWS_AS(symmetric_branch_a1(nb::pi * nb::pi, SymBranch::ThetaPlus, {0.3, 30.0}),
                    NoRoot);

    for (double a2 : {0.8, 2.0, 3.5, -2.0}) {
        for (SymBranch br : {SymBranch::ThetaPlus, SymBranch::ThetaMinus}) {
            auto roots = symmetric_branch_a1(a2, br, {0.3, 30.0});
            REQUIRE(!roots.empty());
            for (double a1 : roots) {
                std::array<double, 3> a{a1, a2, a1};
                CHECK(std::abs(residual(SetId::G3, a)) < 1e-9);
                auto [th, al] = theta_alpha_G(a, 'c');
                double expect_th = br == SymBranch::ThetaPlus ? 1.0 : -1.0;
                CHECK(th == doctest::Approx(expect_th).epsilon(1e-9));
                CHECK(al == doctest::Approx(-expect_th * 2.0 * a1 * a1 * sfun(a1) * sfun(a1))
                                .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("classification of landmark points") {
    auto r2 = classify(std::array{2.0, 2.0}, {4.0, 1.0});
    CHECK(r2.kind == InteractionKind::Reflectionless);
    CHECK(r2.sign == -1);

    auto r3 = classify(std::array{2.0, 4.0, 2.0}, {4.0, 1.0});
    CHECK(r3.kind == InteractionKind::Reflectionless);
    CHECK(r3.sign == +1);

    auto r3m = classify(std::array{3.0, 2.0, -1.0}, {4.0, 1.0});
    CHECK(r3m.kind == InteractionKind::Reflectionless);
    CHECK(r3m.sign == -1);

    CHECK(classify(std::array{1.0, 1.0}, {3.0, 1.7}).kind ==
          InteractionKind::SeparatedDirichlet);
    CHECK(classify(std::array{1.0, 1.0}, {4.0, 1.5}).kind ==
          InteractionKind::SeparatedDirichlet);

    auto dp = classify(std::array{3.0, 1.5}, {2.5, 1.0});
    CHECK(dp.kind == InteractionKind::DeltaPrimePotential);
    CHECK(dp.theta == -2.0);

    auto dpd = classify(std::array{4.0, 3.0, 2.5}, {3.0, 1.0});
    CHECK(dpd.kind == InteractionKind::DeltaPrimePlusDelta);
    CHECK(dpd.theta == doctest::Approx(2.0));
    CHECK(dpd.alpha == doctest::Approx(10.0));

    double q = nb::pi * nb::pi / 4.0;
    auto dq = classify(std::array{q, q}, {2.0, 2.0});
    CHECK(dq.kind == InteractionKind::Delta);
    CHECK(std::abs(dq.alpha) == doctest::Approx(q).epsilon(1e-12));
    Mat2 m = dq.matrix();
    CHECK(m.m11 == doctest::Approx(-1.0));
    CHECK(m.m21 == doctest::Approx(q).epsilon(1e-12));

    auto rp = classify(std::array{nb::pi * nb::pi, 4.0 * nb::pi * nb::pi}, {2.0, 1.5});
    CHECK(rp.kind == InteractionKind::Reflectionless);
    CHECK(rp.sign == -1);

    auto del = classify(std::array{1.0, -1.0}, {4.0, 2.0});
    CHECK(del.kind == InteractionKind::Delta);
    CHECK(del.alpha == doctest::Approx(-1.0));

    auto refl = classify(std::array{1.0, -1.0}, {4.0, 3.0});
    CHECK(refl.kind == InteractionKind::Reflectionless);
    CHECK(refl.sign == +1);

    // N = 3 below mu = 3 never connects, even on the K3 set
    CHECK(classify(std::array{4.0, 3.0, 2.5}, {2.5, 1.0}).kind ==
          InteractionKind::SeparatedDirichlet);
}

TEST_CASE("ambiguous membership band") {
    // residual of K2 at (2 + d, 2) is exactly -d
    CHECK_THROWS_AS(classify(std::array{2.0 + 3e-9, 2.0}, {4.0, 1.0}), AmbiguousMembership);
    CHECK(classify(std::array{2.0 + 3e-8, 2.0}, {4.0, 1.0}).kind ==
          InteractionKind::SeparatedDirichlet);
    CHECK(classify(std::array{2.0 + 3e-10, 2.0}, {4.0, 1.0}).kind ==
          InteractionKind::Reflectionless);
}

TEST_CASE("classify input validation") {
    CHECK_THROWS_AS(classify(std::array{1.0, 2.0, 3.0, 4.0}, {4.0, 1.0}), ArityMismatch);
    CHECK_THROWS_AS(classify(std::array{1.0, 0.0}, {4.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(classify(std::array{1.0, 1.0}, {1.5, 1.0}), OutOfDomain);
}

TEST_CASE("classify is total on random off-band points") {
    std::mt19937_64 rng(23);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    const double mus[] = {2.0, 2.4, 3.0, 4.0, std::numeric_limits<double>::infinity()};
    const double taus[] = {1.0, 1.4, 2.0, 3.0};
    int done = 0;
    while (done < 500) {
        std::size_t n = 2 + (rng() & 1u);
        std::vector<double> a(n);
        for (auto& v : a) {
            v = uni(-8.0, 8.0);
            if (std::abs(v) < 1e-3)
                v = 1.0;
        }
        SqueezePath path{mus[rng() % 5], taus[rng() % 4]};
        try {
            auto li = classify(a, path);
            CHECK(li.kind != InteractionKind::NotConverged);
            if (li.has_matrix())
                CHECK(std::isfinite(li.matrix().m21));
        } catch (const AmbiguousMembership&) {
            continue; // measure-zero band, redraw
        }
        ++done;
    }
}
