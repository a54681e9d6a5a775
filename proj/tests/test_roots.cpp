#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "subrate/roots.hpp"

using namespace subrate;

TEST_SUITE("roots") {

TEST_CASE("brent finds the Dottie number") {
    auto g = [](double x) { return std::cos(x) - x; };
    const double r = brent(g, 0.0, 1.0, 1e-14);
    CHECK(r == doctest::Approx(0.7390851332151607).epsilon(1e-12));
}

TEST_CASE("brent requires a sign change") {
    CHECK_THROWS_AS(brent([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("solve_increasing round trips a cubic") {
    auto g = [](double u) { return u * u * u; };
    const double u = solve_increasing(g, 8.0, 1e-12);
    CHECK(u == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::fabs(g(u) - 8.0) <= 1e-12);
}

TEST_CASE("targets far from the start are bracketed by doubling") {
    auto g = [](double u) { return std::log(u); };
    CHECK(solve_increasing(g, 30.0, 1e-9) == doctest::Approx(std::exp(30.0)).epsilon(1e-8));
    CHECK(solve_increasing(g, -30.0, 1e-9) == doctest::Approx(std::exp(-30.0)).epsilon(1e-8));
}

TEST_CASE("unreachable targets raise range errors") {
    auto bounded = [](double u) { return 1.0 - std::exp(-u); };
    CHECK_THROWS_AS(bracket_increasing(bounded, 2.0), std::range_error);
    CHECK_THROWS_AS(solve_increasing(bounded, 2.0, 1e-9), std::range_error);
}

}  // TEST_SUITE
