#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "squeeze/entire.hpp"

using namespace squeeze;
namespace nb = std::numbers;

TEST_CASE("cfun at landmark arguments") {
    CHECK(cfun(0.0) == 1.0);
    CHECK(cfun(nb::pi * nb::pi) == doctest::Approx(-1.0).epsilon(1e-14));
    // cosh(1), independently summed
    double expected = oracle::series_cosh1();
    CHECK(expected == doctest::Approx(1.5430806348152437).epsilon(1e-15));
    CHECK(cfun(-1.0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("sfun at landmark arguments") {
    CHECK(sfun(0.0) == 1.0);
    CHECK(std::abs(sfun(nb::pi * nb::pi)) < 1e-15);
    double expected = oracle::series_sinh1();
    CHECK(expected == doctest::Approx(1.1752011936438014).epsilon(1e-15));
    CHECK(sfun(-1.0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("ufun value and pole guard") {
    CHECK(ufun(0.0) == 1.0);
    double expected = oracle::series_tanh1();
    CHECK(expected == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    CHECK(ufun(-1.0) == doctest::Approx(expected).epsilon(1e-15));

    double pole = (nb::pi / 2.0) * (nb::pi / 2.0);
    CHECK_THROWS_AS((void)ufun(pole), PoleProximity);
    // just inside the guard band throws, safely outside does not
    double x_in = nb::pi / 2.0 + 5e-9;
    double x_out = nb::pi / 2.0 + 5e-7;
    CHECK_THROWS_AS((void)ufun(x_in * x_in), PoleProximity);
    CHECK_NOTHROW((void)ufun(x_out * x_out));
}

TEST_CASE("pythagorean identity over [-100, 100]") {
    double worst = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        double a = -100.0 + i * 0.005;
        double c = cfun(a), s = sfun(a);
        // relative to the dominant term: cosh^2 - sinh^2 cancels through
        // ~1e8 at a = -100, where an absolute bound is below double
        // resolution of the inputs
        worst = std::max(worst, std::abs(c * c + a * s * s - 1.0) / std::max(1.0, c * c));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("ufun * cfun recovers sfun away from poles") {
    for (int i = 0; i <= 5000; ++i) {
        double a = -40.0 + i * 0.016;
        if (std::abs(cfun(a)) < 1e-6)
            continue;
        CHECK(std::abs(ufun(a) * cfun(a) - sfun(a)) < 1e-12);
    }
}

TEST_CASE("series and closed forms agree across the switchover") {
    // |a| in [1e-5, 1e-3] spans both sides of the 1e-4 series cut
    for (int i = 0; i <= 200; ++i) {
        double mag = std::pow(10.0, -5.0 + 2.0 * i / 200.0);
        for (double a : {mag, -mag}) {
            double closed_c = a > 0 ? std::cos(std::sqrt(a)) : std::cosh(std::sqrt(-a));
            double closed_s = a > 0 ? std::sin(std::sqrt(a)) / std::sqrt(a)
                                    : std::sinh(std::sqrt(-a)) / std::sqrt(-a);
            CHECK(std::abs(cfun(a) - closed_c) < 1e-12);
            CHECK(std::abs(sfun(a) - closed_s) < 1e-12);
        }
    }
}
