#include <doctest.h>

#include <cmath>

#include "subrate/errors.hpp"
#include "subrate/quadrature.hpp"

using namespace subrate;

TEST_SUITE("quadrature") {

TEST_CASE("polynomial and trig on finite intervals") {
    auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto s = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity") {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                       QuadOptions{1e-10, 1e-10, 100000, true});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("semi-infinite exponential tails") {
    auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

    auto s = integrate_semi_infinite([](double x) { return x * std::exp(-x); }, 0.0, 1.0);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));

    auto t = integrate_semi_infinite([](double x) { return std::exp(-x); }, 2.0, 1.0);
    CHECK(t.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("divergent tails are reported, not returned") {
    CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x); }, 0.0, 1.0),
                    DivergenceError);
    CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return std::exp(0.01 * x); }, 0.0, 1.0),
                    DivergenceError);
}

TEST_CASE("adaptive refinement localizes a steep kernel") {
    auto r = integrate([](double x) { return std::exp(-1e4 * (x - 0.77) * (x - 0.77)); }, 0.0, 1.0);
    const double exact = std::sqrt(M_PI / 1e4);
    CHECK(std::fabs(r.value - exact) <= 1e-6 * exact + 10.0 * r.error);
}

}  // TEST_SUITE
