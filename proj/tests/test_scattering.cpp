#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "squeeze/scattering.hpp"

using namespace squeeze;

TEST_CASE("free line transmits everything") {
    auto s = scatter(Mat2::identity(), 0.7);
    CHECK(s.t.real() == doctest::Approx(1.0));
    CHECK(std::abs(s.t.imag()) < 1e-15);
    CHECK(s.T == doctest::Approx(1.0));
    CHECK(s.R == doctest::Approx(0.0));
}

TEST_CASE("single delta transmission") {
    Mat2 m{1.0, 0.0, 2.0, 1.0};
    auto s = scatter(m, 1.0);
    CHECK(s.T == doctest::Approx(0.5).epsilon(1e-14)); // 4k^2/(4k^2 + alpha^2)
    CHECK(s.T + s.R == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonal limit matrices are k-independent") {
    double theta = -2.0;
    Mat2 m{theta, 0.0, 0.0, 1.0 / theta};
    double t_min = 2.0, t_max = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double k = 0.1 + (10.0 - 0.1) * i / 100.0;
        double T = scatter(m, k).T;
        t_min = std::min(t_min, T);
        t_max = std::max(t_max, T);
    }
    CHECK(t_min == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(t_max - t_min < 1e-12);
}

TEST_CASE("non-unimodular inputs are rejected") {
    Mat2 bad{1.0, 0.0, 0.0, 2.0};
    CHECK_THROWS_AS(scatter(bad, 1.0), NonUnimodular);
    CHECK_THROWS_AS(scatter(Mat2::identity(), 0.0), std::invalid_argument);
}

TEST_CASE("scatter_limit by interaction kind") {
    LimitInteraction refl;
    refl.kind = InteractionKind::Reflectionless;
    refl.sign = -1;
    for (double k : {0.1, 1.0, 7.3})
        CHECK(scatter_limit(refl, k).T == doctest::Approx(1.0).epsilon(1e-14));

    LimitInteraction dir;
    dir.kind = InteractionKind::SeparatedDirichlet;
    auto s = scatter_limit(dir, 1.0);
    CHECK(s.T == 0.0);
    CHECK(s.R == 1.0);
    CHECK(s.r.real() == -1.0);

    LimitInteraction dp;
    dp.kind = InteractionKind::DeltaPrimePotential;
    dp.theta = -2.0;
    CHECK(scatter_limit(dp, 3.0).T == doctest::Approx(0.64).epsilon(1e-14));

    LimitInteraction nc;
    nc.kind = InteractionKind::NotConverged;
    CHECK_THROWS_AS(scatter_limit(nc, 1.0), std::invalid_argument);
}

TEST_CASE("unitarity across random stacks") {
    std::mt19937_64 rng(99);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        RegularizedSystem sys;
        std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        for (std::size_t j = 0; j < n; ++j) {
            double v = uni(0.1, 10.0);
            sys.intensities.push_back((rng() & 1u) ? v : -v);
        }
        sys.eps = std::exp(uni(std::log(1e-6), 0.0));
        sys.l = std::pow(sys.eps, uni(1.0, 5.0));
        sys.r = std::pow(sys.eps, uni(1.0, 4.0));
        sys.k = std::exp(uni(std::log(0.1), std::log(10.0)));
        auto s = scatter(stack_matrix(sys), sys.k);
        worst = std::max(worst, std::abs(s.T + s.R - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("transmission decreases with eps off resonance") {
    std::array<double, 2> a{1.0, 1.0};
    SqueezePath path{4.0, 1.0};
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        double T = transmission_sweep(a, path, eps, 1.0, 1.0, 1)[0].T;
        CHECK(T < prev);
        prev = T;
    }
}

TEST_CASE("finite-eps transmission approaches the classified limit") {
    std::array<double, 2> a{3.0, 1.5};
    SqueezePath path{4.0, 1.0};
    double T_lim = scatter_limit(classify(a, path), 1.0).T;
    CHECK(T_lim == doctest::Approx(0.64).epsilon(1e-12));
    auto rows = transmission_sweep(a, path, 1e-5, 1.0, 1.0, 1);
    CHECK(std::abs(rows[0].T - T_lim) < 1e-2);
}

TEST_CASE("limit sweep stays unitary and flat for diagonal kinds") {
    std::array<double, 2> a{3.0, 1.5};
    auto li = classify(a, {4.0, 1.0});
    auto rows = transmission_sweep(li, 0.1, 10.0, 64);
    for (const auto& row : rows) {
        CHECK(row.T + row.R == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.T == doctest::Approx(0.64).epsilon(1e-12));
    }
}
