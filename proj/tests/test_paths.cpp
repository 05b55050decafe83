#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "squeeze/extrapolation.hpp"
#include "squeeze/paths.hpp"

using namespace squeeze;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("path labels") {
    CHECK(path_family(kInf, 1.0).str() == "1a");
    CHECK(path_family(3.0, 1.0).str() == "2a");
    CHECK(path_family(2.0, 2.0).str() == "4c");
    CHECK(path_family(2.5, 1.5).str() == "3b");
    CHECK(path_family(4.0, kInf).str() == "1d");
    CHECK_THROWS_AS(path_family(1.9, 1.0), OutOfDomain);
    CHECK_THROWS_AS(path_family(4.0, 0.5), OutOfDomain);
}

TEST_CASE("eps schedules") {
    CHECK(eps_sequence(1.0, 0.5, 3) == std::vector<double>{1.0, 0.5, 0.25});
    auto two = eps_sequence(0.1, 0.1, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 0.1);
    CHECK(two[1] == doctest::Approx(0.01).epsilon(1e-15));
    auto seq = default_eps_sequence();
    CHECK(seq.size() == 24);
    for (std::size_t i = 1; i < seq.size(); ++i)
        CHECK(seq[i] < seq[i - 1]);
    CHECK_THROWS_AS(eps_sequence(0.0, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(eps_sequence(0.5, 1.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(eps_sequence(0.5, 0.5, 1), std::invalid_argument);
}

TEST_CASE("trace of the fully transparent K2 point approaches -I") {
    std::array<double, 2> a{2.0, 2.0};
    auto trace = evaluate_along_path(a, {4.0, 1.0}, 1.0, eps_sequence(1e-2, 0.1, 4));
    CHECK(trace.matrices.back().m11 == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(trace.matrices.back().m22 == doctest::Approx(-1.0).epsilon(1e-8));
    // monotone approach of m11 toward -1
    for (std::size_t i = 1; i < trace.eps.size(); ++i)
        CHECK(std::abs(trace.matrices[i].m11 + 1.0) < std::abs(trace.matrices[i - 1].m11 + 1.0));
}

TEST_CASE("delta limit on L2 via tau = 2 descent") {
    std::array<double, 2> a{1.0, -1.0};
    // family 1 descent: the tabulated alpha = a1*a2 is exact here
    auto est = estimate_limit(evaluate_along_path(a, {4.0, 2.0}, 1.0, default_eps_sequence()));
    REQUIRE(est.m21.converged());
    CHECK(est.m21.value == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(est.m11.value == doctest::Approx(1.0).epsilon(1e-8));

    // family 2 (mu = 3): the exact product limit carries the extra
    // layer-width correction (a1^2 + a2^2)/6 + a1*a2 on top of a1*a2,
    // giving -5/3 for (1, -1); pinned against the naive product oracle
    auto est3 = estimate_limit(evaluate_along_path(a, {3.0, 2.0}, 1.0, default_eps_sequence()));
    REQUIRE(est3.m21.converged());
    CHECK(est3.m21.value == doctest::Approx(-5.0 / 3.0).epsilon(1e-6));
    auto ref = oracle::naive_stack({1.0, -1.0}, 1e-7L, 1e-14L, 1e-14L, 1.0L);
    CHECK(ref[2] == doctest::Approx(-5.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("off-resonance m21 diverges with exponent -1") {
    std::array<double, 2> a{1.0, 1.0};
    auto seq = eps_sequence(1e-4, std::pow(10.0, -0.5), 9);
    auto trace = evaluate_along_path(a, {4.0, 1.5}, 1.0, seq);
    std::vector<double> m21;
    for (const auto& m : trace.matrices)
        m21.push_back(m.m21);
    CHECK(oracle::loglog_slope(trace.eps, m21) == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("estimate_limit on a constant trace") {
    PathTrace trace;
    trace.eps = {1e-1, 1e-2, 1e-3, 1e-4};
    for (int i = 0; i < 4; ++i)
        trace.matrices.push_back({5.0, 0.0, 0.0, 5.0});
    auto est = estimate_limit(trace);
    CHECK(est.m11.converged());
    CHECK(est.m11.value == 5.0);
    CHECK(est.m11.uncertainty <= 1e-12);
}

TEST_CASE("estimate_limit on an exact power law") {
    PathTrace trace;
    trace.eps = eps_sequence(1e-1, 0.1, 6);
    for (double eps : trace.eps)
        trace.matrices.push_back({1.0, 0.0, 1.0 / eps, 1.0});
    auto est = estimate_limit(trace);
    REQUIRE(est.m21.kind == ElementEstimate::Kind::PowerLaw);
    CHECK(est.m21.exponent == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(est.m21.r2 > 0.999999);
}

TEST_CASE("estimate_limit recovers the K2 diagonal limit") {
    std::array<double, 2> a{3.0, 1.5};
    auto est = estimate_limit(evaluate_along_path(a, {5.0, 1.0}, 1.0, default_eps_sequence()));
    REQUIRE(est.m11.converged());
    REQUIRE(est.m22.converged());
    REQUIRE(est.m21.converged());
    REQUIRE(est.m12.converged());
    CHECK(est.m11.value == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(est.m22.value == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::abs(est.m12.value) < 1e-10);
    CHECK(std::abs(est.m21.value) < 1e-4);
}

TEST_CASE("estimate_limit needs at least four points") {
    PathTrace trace;
    trace.eps = {1e-1, 1e-2, 1e-3};
    trace.matrices.resize(3);
    CHECK_THROWS_AS(estimate_limit(trace), std::invalid_argument);
}

TEST_CASE("estimate_limit fits the finite prefix of a saturated trace") {
    PathTrace trace;
    trace.eps = eps_sequence(1e-1, 0.1, 5);
    double inf = std::numeric_limits<double>::infinity();
    int i = 0;
    for (double y : {1e60, 1e120, 1e180, inf, inf}) {
        Mat2 m;
        m.m21 = (i % 2 == 0) ? y : -y; // saturation keeps the sign
        trace.matrices.push_back(m);
        ++i;
    }
    auto est = estimate_limit(trace);
    REQUIRE(est.m21.kind == ElementEstimate::Kind::PowerLaw);
    CHECK(est.m21.exponent == doctest::Approx(-60.0).epsilon(1e-6));
}

TEST_CASE("estimate_limit reports inconclusive for erratic traces") {
    PathTrace trace;
    trace.eps = eps_sequence(1e-1, 0.1, 8);
    for (int i = 0; i < 8; ++i) {
        Mat2 m;
        m.m21 = (i % 2 == 0) ? 1.0 : 0.1; // neither contracting nor a power law
        trace.matrices.push_back(m);
    }
    auto est = estimate_limit(trace);
    CHECK(est.m21.kind == ElementEstimate::Kind::Inconclusive);
}

TEST_CASE("limit estimates are k-independent") {
    std::array<double, 2> a{3.0, 1.5};
    auto seq = eps_sequence(1e-2, std::pow(10.0, -0.5), 9);
    auto lo = estimate_limit(evaluate_along_path(a, {4.0, 1.0}, 0.5, seq));
    auto hi = estimate_limit(evaluate_along_path(a, {4.0, 1.0}, 2.0, seq));
    for (int e = 0; e < 4; ++e) {
        const auto& le = lo.element(e);
        const auto& he = hi.element(e);
        if (le.converged() && he.converged())
            CHECK(std::abs(le.value - he.value) <=
                  10.0 * (le.uncertainty + he.uncertainty) + 1e-12);
    }
}

TEST_CASE("m12 decays at least as fast as min(2 tau - 1, 1)") {
    std::array<double, 2> a{1.3, 0.9};
    for (double tau : {1.0, 1.5, 2.5}) {
        auto seq = eps_sequence(1e-4, std::pow(10.0, -0.5), 9);
        auto trace = evaluate_along_path(a, {4.0, tau}, 1.0, seq);
        std::vector<double> m12;
        for (const auto& m : trace.matrices)
            m12.push_back(m.m12);
        double slope = oracle::loglog_slope(trace.eps, m12);
        CHECK(slope > std::min(2.0 * tau - 1.0, 1.0) - 0.05);
    }
}

TEST_CASE("infinite exponents walk the cube edges exactly") {
    std::array<double, 2> a{3.0, 1.5};
    Mat2 ideal = matrix_at(a, {kInf, 1.0}, 1.0, 1e-3);
    // l = 0 exactly: product of delta factors and one gap
    Mat2 manual = delta_matrix(1.5, 1e-3) * (gap_matrix(1e-3, 1.0) * delta_matrix(3.0, 1e-3));
    CHECK(ideal.m21 == doctest::Approx(manual.m21).epsilon(1e-12));

    Mat2 both = matrix_at(a, {kInf, kInf, LimitOrder::MuFirst}, 1.0, 1e-3);
    CHECK(both.m12 == 0.0);
    CHECK(both.m11 == 1.0);
    CHECK(both.m21 == doctest::Approx(-(3.0 + 1.5) / 1e-3));
}
