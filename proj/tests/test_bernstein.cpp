#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "subrate/bernstein.hpp"
#include "subrate/errors.hpp"
#include "subrate/grid.hpp"

using namespace subrate;

namespace {

const char* kCatalogNames[] = {"stable",           "log",
                               "gamma",            "stable-log-plus",
                               "stable-log-minus", "relativistic-like",
                               "compound-poisson-drift"};

BernsteinFunction default_member(const std::string& name) {
    if (name == "stable") return catalog("stable", {{"alpha", 0.5}});
    if (name == "stable-log-plus") return catalog(name, {{"alpha", 0.5}, {"beta", 0.2}});
    if (name == "stable-log-minus") return catalog(name, {{"alpha", 0.5}, {"beta", 0.2}});
    if (name == "relativistic-like") return catalog(name, {{"alpha", 0.5}});
    if (name == "compound-poisson-drift") return catalog(name, {{"drift", 1.0}, {"rate", 1.0}});
    return catalog(name);
}

}  // namespace

TEST_SUITE("bernstein") {

TEST_CASE("evaluate closed forms") {
    const BernsteinFunction root = catalog("stable", {{"alpha", 0.5}});
    CHECK(root(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    const BernsteinFunction lg = catalog("log");
    CHECK(lg(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(root(0.0), std::domain_error);
    CHECK_THROWS_AS(root(-1.0), std::domain_error);
}

TEST_CASE("triplet-only evaluation: stable density against the closed form") {
    // density y^{-1-alpha} with alpha = 0.5 integrates to Gamma(1-alpha) u^alpha / alpha
    LevyTriplet trip{0.0, [](double y) { return std::pow(y, -1.5); }};
    const BernsteinFunction phi(std::move(trip));
    const double expected = std::tgamma(0.5) * 1.0 / 0.5;  // 2 sqrt(pi)
    CHECK(phi(1.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(phi(1.0) == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-9));
}

TEST_CASE("catalog triplet consistency: closed form vs quadrature") {
    for (const char* name : {"stable", "log", "gamma"}) {
        const BernsteinFunction phi = default_member(name);
        REQUIRE(phi.has_triplet());
        for (double u : geometric_grid(1e-4, 1e4, 9)) {
            const double closed = phi(u);
            const double quad = phi.evaluate_from_triplet(u);
            CHECK(std::fabs(quad - closed) <= 1e-8 * std::fabs(closed));
        }
    }
    // exponential-jump compound Poisson also carries a density triplet
    const BernsteinFunction cpd =
        catalog("compound-poisson-drift", {{"drift", 0.5}, {"rate", 2.0}, {"jump_rate", 3.0}});
    REQUIRE(cpd.has_triplet());
    for (double u : {0.1, 1.0, 30.0})
        CHECK(cpd.evaluate_from_triplet(u) == doctest::Approx(cpd(u)).epsilon(1e-8));
}

TEST_CASE("catalog rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(catalog("no-such-family"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("stable", {{"alpha", 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(catalog("stable-log-plus", {{"alpha", 0.5}, {"beta", 0.6}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog("stable-log-minus", {{"alpha", 0.5}, {"beta", 0.7}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog("compound-poisson-drift", {{"drift", 0.0}, {"rate", 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("constant rules are rejected at construction") {
    CHECK_THROWS_AS(BernsteinFunction([](double) { return 1.0; }), std::invalid_argument);
}

TEST_CASE("monotone and concave on a geometric grid, for every catalog member") {
    for (const char* name : kCatalogNames) {
        const BernsteinFunction phi = default_member(name);
        const auto grid = geometric_grid(1e-4, 1e4, 64);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double lo = phi(grid[i]);
            const double hi = phi(grid[i + 1]);
            CHECK(lo < hi);
            // midpoint form of the second difference avoids uneven-spacing artifacts
            const double mid = phi(0.5 * (grid[i] + grid[i + 1]));
            CHECK(lo + hi - 2.0 * mid <= 1e-10 * (std::fabs(lo) + std::fabs(hi)));
        }
    }
}

TEST_CASE("invert round trips across the catalog") {
    const double tol = 1e-10;
    const BernsteinFunction root = catalog("stable", {{"alpha", 0.5}});
    CHECK(invert(root, 2.0, tol) == doctest::Approx(4.0).epsilon(1e-9));
    const BernsteinFunction lg = catalog("log");
    CHECK(invert(lg, 1.0, tol) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));

    const BernsteinFunction mix = catalog("stable-log-plus", {{"alpha", 0.3}, {"beta", 0.2}});
    const double u = invert(mix, 0.7, tol);
    CHECK(std::fabs(mix(u) - 0.7) <= tol * 1.0);

    for (const char* name : kCatalogNames) {
        const BernsteinFunction phi = default_member(name);
        for (double v : geometric_grid(1e-3, 1e2, 7)) {
            const double uu = invert(phi, v, tol);
            CHECK(std::fabs(phi(uu) - v) <= tol * std::max(1.0, v));
        }
    }
}

TEST_CASE("invert reports unreachable targets and bad tolerances") {
    // bounded exponent: pure jump part, no drift
    const BernsteinFunction bounded = catalog("compound-poisson-drift", {{"rate", 1.0}});
    CHECK_THROWS_AS(invert(bounded, 5.0, 1e-9), std::range_error);
    const BernsteinFunction root = catalog("stable", {{"alpha", 0.5}});
    CHECK_THROWS_AS(invert(root, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(invert(root, -1.0, 1e-9), std::range_error);
}

TEST_CASE("condition diagnostics across the catalog") {
    const BernsteinFunction lg = catalog("log");
    ConditionReport rep = condition_diagnostics(lg, 2.0);
    CHECK(rep.verdict == ConditionReport::Verdict::pass);
    CHECK(rep.doubling_liminf_proxy == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(rep.ratio_log_liminf_proxy > 0.9);

    const BernsteinFunction root = catalog("stable", {{"alpha", 0.5}});
    rep = condition_diagnostics(root, 2.0);
    CHECK(rep.verdict == ConditionReport::Verdict::pass);
    CHECK(rep.doubling_liminf_proxy == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    // pure drift: S_t = t
    const BernsteinFunction drift = catalog("compound-poisson-drift", {{"drift", 1.0}});
    rep = condition_diagnostics(drift, 2.0);
    CHECK(rep.verdict == ConditionReport::Verdict::pass);
    CHECK(rep.doubling_liminf_proxy == doctest::Approx(2.0).epsilon(1e-12));

    // bounded exponent fails the growth half of the condition
    const BernsteinFunction bounded = catalog("compound-poisson-drift", {{"rate", 1.0}});
    rep = condition_diagnostics(bounded, 2.0);
    CHECK(rep.verdict == ConditionReport::Verdict::fail);

    // custom rules can never be certified by a finite grid
    const BernsteinFunction custom([](double u) { return std::sqrt(u); });
    rep = condition_diagnostics(custom, 2.0);
    CHECK(rep.verdict == ConditionReport::Verdict::inconclusive);

    CHECK_THROWS_AS(condition_diagnostics(lg, 1.0), std::invalid_argument);
}

TEST_CASE("doubling index") {
    GridSpec grid;
    CHECK(doubling_index([](double t) { return std::sqrt(t); }, Endpoint::infinity, 4.0, grid) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(doubling_index([](double t) { return t; }, Endpoint::zero, 3.0, grid) ==
          doctest::Approx(3.0).epsilon(1e-12));

    // log1p grows too slowly: the index collapses to 1 at the far end
    const double idx =
        doubling_index([](double t) { return std::log1p(t); }, Endpoint::infinity, 2.0, grid);
    const double oracle = std::log1p(2e8) / std::log1p(1e8);
    CHECK(idx == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(idx < 1.05);

    CHECK_THROWS_AS(doubling_index([](double t) { return std::sin(t); }, Endpoint::zero, 2.0, grid),
                    MonotonicityError);
}

TEST_CASE("power envelope") {
    const PowerFit exact =
        power_envelope([](double t) { return 3.0 * std::pow(t, 0.7); }, Endpoint::zero);
    CHECK(exact.c == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(exact.kappa == doctest::Approx(0.7).epsilon(1e-6));

    // s^0.5 log^0.2(1+s) behaves like s^0.7 near zero
    const BernsteinFunction mix = catalog("stable-log-plus", {{"alpha", 0.5}, {"beta", 0.2}});
    const PowerFit small = power_envelope([&](double t) { return mix(t); }, Endpoint::zero);
    CHECK(small.kappa == doctest::Approx(0.7).epsilon(1e-2));

    const PowerFit lg = power_envelope([](double t) { return std::log1p(t); }, Endpoint::zero);
    CHECK(lg.kappa == doctest::Approx(1.0).epsilon(1e-2));

    CHECK_THROWS_AS(power_envelope([](double) { return -1.0; }, Endpoint::zero),
                    std::domain_error);
}

TEST_CASE("doubling of phi at zero controls doubling of its inverse") {
    // finite-grid restatement of the inverse-function equivalences
    const GridSpec grid{1e-8, 1e2, 41};
    for (const char* name : kCatalogNames) {
        const BernsteinFunction phi = default_member(name);
        const double idx = doubling_index([&](double t) { return phi(t); }, Endpoint::zero, 2.0, grid);
        if (idx > 1.05) {
            const double inv_idx = doubling_index(
                [&](double v) { return invert(phi, v, 1e-11); }, Endpoint::zero, 2.0, grid);
            CHECK(std::isfinite(inv_idx));
            CHECK(inv_idx < 64.0);
        }
    }
}

}  // TEST_SUITE
