#include "subrate/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "subrate/errors.hpp"
#include "subrate/grid.hpp"
#include "subrate/quadrature.hpp"
#include "subrate/roots.hpp"

namespace subrate {

namespace {

constexpr double kInvertTol = 1e-10;
const QuadOptions kMomentQuad{1e-12, 1e-9, 100000, true};

double finite_or(double x, double cap) { return std::isfinite(x) ? x : cap; }

MomentEstimate from_mean_se(const MeanSe& m, Method method) {
    MomentEstimate est;
    est.value = m.mean;
    est.error = m.se;
    est.n_or_nodes = m.n;
    est.method = method;
    est.log_value = m.mean > 0.0 ? std::log(m.mean) : -std::numeric_limits<double>::infinity();
    est.log_error = m.se > 0.0 ? std::log(m.se) : -std::numeric_limits<double>::infinity();
    est.variance_warning = m.se > std::fabs(m.mean);
    return est;
}

}  // namespace

RateFunction RateFunction::sub_exponential(double theta, double delta) {
    if (!(theta > 0.0) || !(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("RateFunction: need theta > 0, delta in (0,1]");
    return RateFunction(Family::sub_exponential, theta, delta,
                        [theta, delta](double t) { return std::exp(-theta * std::pow(t, delta)); });
}

RateFunction RateFunction::algebraic(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("RateFunction: need beta > 0");
    return RateFunction(Family::algebraic, beta, 0.0,
                        [beta](double t) { return std::pow(1.0 + t, -beta); });
}

RateFunction RateFunction::logarithmic(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("RateFunction: need gamma > 0");
    return RateFunction(Family::logarithmic, gamma, 0.0,
                        [gamma](double t) { return std::pow(1.0 + std::log1p(t), -gamma); });
}

RateFunction RateFunction::custom(std::function<double(double)> eval) {
    if (!eval) throw std::invalid_argument("RateFunction: null rule");
    double prev = eval(0.0);
    if (!(prev <= 1.0 && prev > 0.0))
        throw std::invalid_argument("RateFunction: r(0) must lie in (0,1]");
    for (double t : geometric_grid(1e-6, 1e6, 25)) {
        const double v = eval(t);
        if (!(v > 0.0) || v > prev * (1.0 + 1e-12))
            throw std::invalid_argument("RateFunction: rule must be non-increasing with values in (0,1]");
        prev = v;
    }
    return RateFunction(Family::custom, 0.0, 0.0, std::move(eval));
}

MomentEstimate neg_moment_quadrature(const BernsteinFunction& phi, double beta, double t) {
    if (!(beta > 0.0)) throw std::domain_error("neg_moment_quadrature: beta must be > 0");
    if (!(t > 0.0)) throw std::domain_error("neg_moment_quadrature: t must be > 0");
    double u0;
    try {
        u0 = invert(phi, 1.0 / t, kInvertTol);
    } catch (const std::range_error&) {
        throw DivergenceError(
            "neg_moment_quadrature: large-u tail diverges (phi appears bounded below 1/t)");
    }
    // piece on (0, u0]: u = u0 w^{1/beta} removes the u^{beta-1} singularity and
    // factors out the natural scale u0^beta
    auto near = [&](double w) {
        const double u = u0 * std::pow(w, 1.0 / beta);
        return u > 0.0 ? std::exp(-t * phi(u)) : 1.0;
    };
    QuadResult a = integrate(near, 0.0, 1.0, kMomentQuad);
    // piece on [u0, inf): u = u0 e^x; integrand e^{beta x - t phi(u0 e^x)} stays
    // NaN-free because phi(huge) is evaluated through a capped argument
    auto tail = [&](double x) {
        double u = u0 * std::exp(x);
        if (!std::isfinite(u)) u = std::numeric_limits<double>::max();
        return std::exp(beta * x - t * finite_or(phi(u), std::numeric_limits<double>::max()));
    };
    QuadResult b = integrate_semi_infinite(tail, 0.0, 1.0, kMomentQuad, 96,
                                           "large-u tail (beta too large for the growth of phi)");
    const double scale = std::pow(u0, beta) / std::tgamma(beta);
    MomentEstimate est;
    est.value = scale * (a.value / beta + b.value);
    est.error = scale * (a.error / beta + b.error);
    est.n_or_nodes = a.nodes + b.nodes;
    est.method = Method::quadrature;
    est.log_value = est.value > 0.0 ? std::log(est.value) : -std::numeric_limits<double>::infinity();
    est.log_error = est.error > 0.0 ? std::log(est.error) : -std::numeric_limits<double>::infinity();
    return est;
}

double neg_moment_lower_bound(const BernsteinFunction& phi, double beta, double t) {
    if (!(beta > 0.0) || !(t > 0.0))
        throw std::domain_error("neg_moment_lower_bound: beta, t must be > 0");
    const double u0 = invert(phi, 1.0 / t, kInvertTol);
    return std::pow(u0, beta) / (std::exp(1.0) * beta * std::tgamma(beta));
}

MomentEstimate neg_moment_mc(const SubordinatorSampler& sampler, double beta, double t,
                             std::size_t n, std::uint64_t stream_id, Exec ex) {
    if (!(beta > 0.0)) throw std::domain_error("neg_moment_mc: beta must be > 0");
    if (n < 1000) throw std::invalid_argument("neg_moment_mc: n must be >= 1000");
    SampleBatch batch = sampler.sample(t, n, stream_id, ex);
    for (double s : batch.values)
        if (s == 0.0)
            throw std::domain_error("neg_moment_mc: zero draw makes S^{-beta} singular");
    const double* v = batch.values.data();
    MeanSe m = blocked_mean_se(ex, n, [v, beta](std::size_t i) { return std::pow(v[i], -beta); });
    return from_mean_se(m, Method::mc);
}

MomentEstimate subexp_moment_mc(const SubordinatorSampler& sampler, double theta, double delta,
                                double t, std::size_t n, std::uint64_t stream_id, Exec ex) {
    if (!(theta > 0.0) || !(delta > 0.0 && delta <= 1.0))
        throw std::domain_error("subexp_moment_mc: need theta > 0, delta in (0,1]");
    if (n < 1) throw std::invalid_argument("subexp_moment_mc: n must be >= 1");
    SampleBatch batch = sampler.sample(t, n, stream_id, ex);
    const double* v = batch.values.data();
    LogMeanSe m = blocked_logsumexp_mean(
        ex, n, [v, theta, delta](std::size_t i) { return theta * std::pow(v[i], delta); });
    MomentEstimate est;
    est.log_value = m.log_mean;
    est.log_error = m.log_se;
    est.value = std::exp(m.log_mean);
    est.error = std::exp(m.log_se);
    est.n_or_nodes = n;
    est.method = Method::mc;
    est.variance_warning = m.log_se > m.log_mean;
    return est;
}

MomentEstimate log_moment_mc(const SubordinatorSampler& sampler, double gamma, double t,
                             std::size_t n, std::uint64_t stream_id, Exec ex) {
    if (!(gamma > 0.0)) throw std::domain_error("log_moment_mc: gamma must be > 0");
    if (n < 1) throw std::invalid_argument("log_moment_mc: n must be >= 1");
    SampleBatch batch = sampler.sample(t, n, stream_id, ex);
    const double* v = batch.values.data();
    MeanSe m = blocked_mean_se(ex, n, [v, gamma](std::size_t i) {
        const double l = std::log1p(v[i]);
        return l <= 1.0 ? 1.0 : std::pow(l, -gamma);
    });
    return from_mean_se(m, Method::mc);
}

// ---------------------------------------------------------------------------
// OdeBoundKit
// ---------------------------------------------------------------------------

double OdeBoundKit::rho(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("OdeBoundKit::rho: u must be in (0,1]");
    const double l = -std::log(u);
    const double bracket = std::pow(1.0 + l, 1.0 / delta) - std::pow(l, 1.0 / delta);
    return u * std::pow(bracket, -alpha);
}

double OdeBoundKit::y(double x) const {
    if (!(x >= 0.0)) throw std::domain_error("OdeBoundKit::y: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (delta == 1.0) return x;
    if (delta == 0.5) {
        // (1+s)^2 - s^2 = 1 + 2s, so y(x) = ((1+2x)^{alpha+1} - 1) / (2(alpha+1))
        return (std::pow(1.0 + 2.0 * x, alpha + 1.0) - 1.0) / (2.0 * (alpha + 1.0));
    }
    const double inv_delta = 1.0 / delta;
    auto integrand = [this, inv_delta](double s) {
        return std::pow(std::pow(1.0 + s, inv_delta) - std::pow(s, inv_delta), alpha);
    };
    return integrate(integrand, 0.0, x, kMomentQuad).value;
}

double OdeBoundKit::y_inverse(double w) const {
    if (!(w >= 0.0)) throw std::domain_error("OdeBoundKit::y_inverse: w must be >= 0");
    if (w == 0.0) return 0.0;
    return solve_increasing([this](double x) { return y(x); }, w, 1e-9 * std::max(1.0, w));
}

double OdeBoundKit::G(double v) const {
    if (!(v > 0.0 && v <= 1.0)) throw std::domain_error("OdeBoundKit::G: v must be in (0,1]");
    return -y(-std::log(v));
}

double OdeBoundKit::G_inverse(double w) const {
    if (!(w <= 0.0)) throw std::domain_error("OdeBoundKit::G_inverse: w must be <= 0");
    return std::exp(-y_inverse(-w));
}

OdeBoundKit build_ode_kit(double theta, double delta, double c, double alpha) {
    if (!(theta > 0.0) || !(c > 0.0) || !(delta > 0.0 && delta <= 1.0) ||
        !(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("build_ode_kit: need theta,c > 0, delta in (0,1], alpha in (0,1)");
    OdeBoundKit kit;
    kit.theta = theta;
    kit.delta = delta;
    kit.c = c;
    kit.alpha = alpha;
    kit.C1 = (1.0 - std::exp(-1.0)) * c * std::pow(theta, alpha / delta) / alpha;
    return kit;
}

double subexp_bound_ode(const OdeBoundKit& kit, double t) {
    if (!(t >= 0.0)) throw std::domain_error("subexp_bound_ode: t must be >= 0");
    return std::exp(log_subexp_bound_ode(kit, t));  // underflows cleanly to 0
}

double log_subexp_bound_ode(const OdeBoundKit& kit, double t) {
    if (!(t >= 0.0)) throw std::domain_error("log_subexp_bound_ode: t must be >= 0");
    return -kit.y_inverse(kit.C1 * t);
}

double log_subexp_bound_closed(double theta, double delta, double c, double alpha, double t) {
    OdeBoundKit kit = build_ode_kit(theta, delta, c, alpha);
    const double m = (alpha * (1.0 - delta) + delta) / delta;
    const double C2 = std::pow(delta, -alpha) * std::pow(2.0, alpha * (1.0 - delta) / delta) *
                      std::max(1.0, 1.0 / m);
    if (!(t > 2.0 * C2 / kit.C1)) return 0.0;  // bound is the trivial 1
    return -std::pow(kit.C1 * t / C2 - 1.0, 1.0 / m);
}

double subexp_bound_closed(double theta, double delta, double c, double alpha, double t) {
    return std::exp(log_subexp_bound_closed(theta, delta, c, alpha, t));
}

double log_moment_upper(double gamma, double c, double alpha, double t, double fitted_C) {
    if (!(gamma > 0.0) || !(c > 0.0) || !(alpha > 0.0 && alpha < 1.0) || !(t > 0.0))
        throw std::domain_error("log_moment_upper: bad parameters");
    return fitted_C * std::pow(std::log1p(std::pow(t, 1.0 / alpha)), -gamma);
}

double log_moment_lower(double gamma, double alpha, double t, double E_log_1pS1) {
    if (!(gamma > 0.0) || !(alpha > 0.0 && alpha < 1.0) || !(t > 0.0))
        throw std::domain_error("log_moment_lower: bad parameters");
    if (!(E_log_1pS1 > 0.0)) throw std::domain_error("log_moment_lower: E log(1+S1) must be > 0");
    const double base = E_log_1pS1 / std::log(2.0);
    const double constant = t >= 1.0 ? base + 1.0 / alpha : base;
    return std::pow(constant, -gamma) * std::pow(std::log1p(std::pow(t, 1.0 / alpha)), -gamma);
}

MomentEstimate rate_subordinate(const RateFunction& r, const SubordinatorSampler& sampler,
                                double t, std::size_t n, std::uint64_t stream_id, Exec ex) {
    if (n < 1) throw std::invalid_argument("rate_subordinate: n must be >= 1");
    SampleBatch batch = sampler.sample(t, n, stream_id, ex);
    const double* v = batch.values.data();
    MeanSe m = blocked_mean_se(ex, n, [v, &r](std::size_t i) { return r(v[i]); });
    return from_mean_se(m, Method::mc);
}

double transferred_rate(TransferCase cse, const TransferParams& p, const BernsteinFunction* phi,
                     double t, double fitted_C) {
    if (!(t >= 0.0)) throw std::domain_error("transferred_rate: t must be >= 0");
    switch (cse) {
        case TransferCase::a: {
            if (!(p.delta > 0.0 && p.delta <= 1.0) || !(p.alpha > 0.0 && p.alpha < 1.0))
                throw std::invalid_argument("transferred_rate a: need delta in (0,1], alpha in (0,1)");
            const double expo = p.delta / (p.alpha * (1.0 - p.delta) + p.delta);
            return std::exp(-fitted_C * std::pow(t, expo));
        }
        case TransferCase::b: {
            if (!(p.beta > 0.0)) throw std::invalid_argument("transferred_rate b: need beta > 0");
            if (phi == nullptr || phi->condition_flag() != TriState::yes)
                throw std::invalid_argument(
                    "transferred_rate b: phi lacks the growth/doubling condition flag");
            if (t == 0.0) return 1.0;
            const double u0 = invert(*phi, 1.0 / t, kInvertTol);
            return std::min(1.0, std::pow(u0, p.beta));
        }
        case TransferCase::c: {
            if (!(p.gamma > 0.0)) throw std::invalid_argument("transferred_rate c: need gamma > 0");
            if (t == 0.0) return 1.0;
            return std::min(1.0, std::pow(std::log1p(t), -p.gamma));
        }
    }
    return 1.0;
}

double ode_comparison_bound(double h0, double C, const std::function<double(double)>& rho, double t) {
    if (!(h0 > 0.0 && h0 <= 1.0)) throw std::domain_error("ode_comparison_bound: h0 must be in (0,1]");
    if (!(C > 0.0)) throw std::domain_error("ode_comparison_bound: C must be > 0");
    if (!(t >= 0.0)) throw std::domain_error("ode_comparison_bound: t must be >= 0");
    if (t == 0.0) return h0;
    // F(v) = int_v^1 du/rho(u) = -G(v), computed with u = e^{-s} which flattens the
    // integrable blow-up of 1/rho near 0
    auto F = [&](double v) {
        if (v >= 1.0) return 0.0;
        auto integrand = [&rho](double s) {
            const double u = std::exp(-s);
            const double r = rho(u);
            if (!(r > 0.0)) throw IntegrationError("ode_comparison_bound: rho must be positive on (0,1]");
            return u / r;
        };
        return integrate(integrand, 0.0, -std::log(v), kMomentQuad).value;
    };
    const double target = F(h0) + C * t;  // solve F(v) = target, F decreasing in v
    double lo = 0.5 * h0;
    while (F(lo) < target) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;  // rho integrable near 0: the bound has hit 0
    }
    const double v = brent([&](double u) { return F(u) - target; }, lo, h0, 0.0);
    return std::clamp(v, 0.0, h0);
}

ConvexityReport appendix_g_check(double tau, double alpha, const std::vector<double>& grid) {
    if (!(tau >= 1.0)) throw std::invalid_argument("appendix_g_check: tau must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("appendix_g_check: alpha must be in (0,1)");
    if (grid.size() < 3) throw std::invalid_argument("appendix_g_check: need >= 3 grid points");
    std::vector<double> vals(grid.size());
    double prev_x = 0.0, prev_gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (!(x > 0.0 && x < 1.0))
            throw std::invalid_argument("appendix_g_check: grid must lie strictly inside (0,1)");
        if (i > 0) {
            const double gap = x - prev_x;
            if (!(gap > 0.0) || gap + 1e-18 < prev_gap)
                throw std::invalid_argument(
                    "appendix_g_check: grid must ascend with non-decreasing spacing");
            prev_gap = gap;
        }
        prev_x = x;
        const double l = -std::log(x);
        vals[i] = x * std::pow(std::pow(1.0 + l, tau) - std::pow(l, tau), -alpha);
    }
    ConvexityReport rep;
    rep.min_first_difference = std::numeric_limits<double>::infinity();
    rep.min_second_difference = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < vals.size(); ++i) {
        rep.min_first_difference = std::min(rep.min_first_difference, vals[i] - vals[i - 1]);
        if (i + 1 < vals.size())
            rep.min_second_difference =
                std::min(rep.min_second_difference, vals[i + 1] - 2.0 * vals[i] + vals[i - 1]);
    }
    rep.pass = rep.min_first_difference >= -1e-12 && rep.min_second_difference >= -1e-12;
    return rep;
}

bool log_product_inequality_check(double tau, double x) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("log_product_inequality_check: tau in (0,1)");
    if (!(x >= 0.0)) throw std::domain_error("log_product_inequality_check: x >= 0");
    return std::log1p(tau * x) <= std::log1p(tau) * std::log1p(x) / std::log(2.0);
}

bool log_ratio_decreasing_check(double x, double lambda) {
    if (!(x > 0.0 && x < lambda)) throw std::domain_error("log_ratio_decreasing_check: need 0 < x < lambda");
    return std::log1p(x) / x > std::log1p(lambda) / lambda;
}

}  // namespace subrate
