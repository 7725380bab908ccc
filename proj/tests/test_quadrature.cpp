#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldp/quadrature.hpp"

using namespace ldp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("polynomials integrate exactly") {
    const auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(r.value - 1.0 / 3.0) <= r.error_bound + 1e-15);
}

TEST_CASE("oscillatory integrand meets the requested tolerance") {
    const auto r = quad::integrate([](double x) { return std::sin(50.0 * x); }, 0.0, kPi);
    const double exact = (1.0 - std::cos(50.0 * kPi)) / 50.0;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity converges") {
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("half-line integrals reach exponential and algebraic tails") {
    const auto expo = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0,
                                                  1e-13, 1e-13);
    CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-11));

    const auto gauss = quad::integrate_to_infinity(
        [](double x) { return std::exp(-x * x / 2.0); }, 0.0, 1e-13, 1e-13);
    CHECK(gauss.value == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-11));

    const auto heavy = quad::integrate_to_infinity(
        [](double x) { return std::pow(1.0 + x, -2.5); }, 0.0, 1e-13, 1e-13);
    CHECK(heavy.value == doctest::Approx(1.0 / 1.5).epsilon(1e-10));
}

TEST_CASE("half-line start point offsets are honoured") {
    const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 3.0,
                                               1e-13, 1e-13);
    CHECK(r.value == doctest::Approx(std::exp(-3.0)).epsilon(1e-11));
}

TEST_CASE("gauss legendre nodes integrate high-degree monomials exactly") {
    const auto& nodes = quad::gauss_legendre_nodes(24);
    const auto& weights = quad::gauss_legendre_weights(24);
    REQUIRE(nodes.size() == 24);
    REQUIRE(weights.size() == 24);
    double integral = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        integral += weights[i] * std::pow(nodes[i], 40);
    CHECK(integral == doctest::Approx(2.0 / 41.0).epsilon(1e-12));
    double total = 0.0;
    for (double w : weights) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("reported error bounds are trustworthy on a hard integrand") {
    const auto r = quad::integrate([](double x) { return std::exp(-x) / std::sqrt(x); }, 0.0, 10.0,
                                   1e-10, 1e-10);
    const double exact = 1.7724401226;  // sqrt(pi) erf(sqrt(10))
    CHECK(std::abs(r.value - exact) <= std::max(r.error_bound, 1e-8));
}
