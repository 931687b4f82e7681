#include "winfree/quadrature.hpp"

#include <doctest.h>

#include <cmath>

#include "winfree/errors.hpp"
#include "winfree/kernel.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("composite rule is exact on cubics") {
    const auto cubic = [](double x) { return ((2.0 * x - 3.0) * x + 1.0) * x - 4.0; };
    // Antiderivative at 5 minus at -1: x^4/2 - x^3 + x^2/2 - 4x.
    const double exact = (312.5 - 125.0 + 12.5 - 20.0) - (0.5 + 1.0 + 0.5 + 4.0);
    CHECK(winfree::simpson(cubic, -1.0, 5.0, 2) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(winfree::simpson(cubic, -1.0, 5.0, 64) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("composite rule validates the interval count") {
    const auto f = [](double x) { return x; };
    CHECK_THROWS_AS((void)winfree::simpson(f, 0.0, 1.0, 3), winfree::domain_error);
    CHECK_THROWS_AS((void)winfree::simpson(f, 0.0, 1.0, 0), winfree::domain_error);
}

TEST_CASE("adaptive rule hits analytic integrals") {
    const double sine = winfree::adaptive_simpson([](double x) { return std::sin(x); },
                                                  0.0, kPi, 1e-12);
    CHECK(sine == doctest::Approx(2.0).epsilon(1e-12));
    const double expo = winfree::adaptive_simpson([](double x) { return std::exp(x); },
                                                  0.0, 1.0, 1e-12);
    CHECK(expo == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("adaptive rule resolves a sharply peaked kernel") {
    const winfree::Kernel kernel(50);
    const double mass = winfree::adaptive_simpson(
        [&](double t) { return kernel.influence(t); }, -kPi, kPi, 1e-10);
    CHECK(mass == doctest::Approx(2.0 * kPi).epsilon(1e-8));
}

}  // TEST_SUITE
