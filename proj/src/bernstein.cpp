#include "subrate/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subrate/errors.hpp"
#include "subrate/grid.hpp"
#include "subrate/quadrature.hpp"
#include "subrate/roots.hpp"
#include "subrate/stats.hpp"

namespace subrate {

namespace {

const QuadOptions kLevyQuad{1e-13, 1e-9, 400, true};

double require_positive_param(const BernsteinFunction::Params& p, const std::string& key,
                              double fallback = std::nan("")) {
    auto it = p.find(key);
    if (it == p.end()) {
        if (std::isnan(fallback))
            throw std::invalid_argument("catalog: missing parameter '" + key + "'");
        return fallback;
    }
    return it->second;
}

}  // namespace

void LevyTriplet::validate() const {
    if (!(drift >= 0.0)) throw std::invalid_argument("LevyTriplet: drift must be >= 0");
    if (!levy_density) return;
    // int_0^1 y*density(y) dy with y = e^{-x}; once y underflows, the integrand's
    // limit (forced by integrability) is 0
    auto small = [this](double x) {
        const double y = std::exp(-x);
        if (y == 0.0) return 0.0;
        return y * y * levy_density(y);
    };
    QuadResult a = integrate_semi_infinite(small, 0.0, 1.0, kLevyQuad, 96, "small-jump tail");
    // int_1^inf density(y) dy with y = e^{x}
    auto large = [this](double x) {
        const double y = std::exp(x);
        if (!std::isfinite(y)) return 0.0;
        return y * levy_density(y);
    };
    QuadResult b = integrate_semi_infinite(large, 0.0, 1.0, kLevyQuad, 96, "large-jump tail");
    if (!std::isfinite(a.value) || !std::isfinite(b.value))
        throw std::invalid_argument("LevyTriplet: (y ^ 1)-integrability fails");
}

namespace {

double eval_triplet(const LevyTriplet& t, double u) {
    double out = t.drift * u;
    if (t.levy_density) {
        auto small = [&](double x) {
            const double y = std::exp(-x);
            if (y == 0.0) return 0.0;
            return -std::expm1(-u * y) * t.levy_density(y) * y;
        };
        out += integrate_semi_infinite(small, 0.0, 1.0, kLevyQuad, 96, "small-jump tail").value;
        auto large = [&](double x) {
            const double y = std::exp(x);
            if (!std::isfinite(y)) return 0.0;
            return -std::expm1(-u * y) * t.levy_density(y) * y;
        };
        out += integrate_semi_infinite(large, 0.0, 1.0, kLevyQuad, 96, "large-jump tail").value;
    }
    return out;
}

void reject_degenerate(const std::function<double(double)>& f, const char* what,
                       double lo, double hi, std::size_t n) {
    // non-decreasing up to floating-point saturation (bounded exponents flatten at
    // the top of the probe grid), but a constant rule is rejected outright
    double first = 0.0, prev = -1.0;
    for (double u : geometric_grid(lo, hi, n)) {
        const double v = f(u);
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument(std::string(what) + ": rule is not positive and finite");
        if (v < prev)
            throw std::invalid_argument(std::string(what) + ": rule is decreasing");
        if (prev < 0.0) first = v;
        prev = v;
    }
    if (!(prev > first))
        throw std::invalid_argument(std::string(what) + ": rule is constant (degenerate)");
}

}  // namespace

BernsteinFunction::BernsteinFunction(std::function<double(double)> eval, std::string name,
                                     Params params, TriState condition_flag)
    : eval_(std::move(eval)),
      name_(std::move(name)),
      params_(std::move(params)),
      condition_flag_(condition_flag) {
    if (!eval_) throw std::invalid_argument("BernsteinFunction: null evaluation rule");
    reject_degenerate(eval_, "BernsteinFunction", 1e-6, 1e6, 25);
}

BernsteinFunction::BernsteinFunction(LevyTriplet triplet, std::string name, Params params,
                                     TriState condition_flag)
    : name_(std::move(name)), params_(std::move(params)), condition_flag_(condition_flag) {
    triplet.validate();
    triplet_ = std::move(triplet);
    eval_ = [t = *triplet_](double u) { return eval_triplet(t, u); };
    reject_degenerate(eval_, "BernsteinFunction(triplet)", 1e-3, 1e3, 7);
}

BernsteinFunction::BernsteinFunction(std::function<double(double)> eval, LevyTriplet triplet,
                                     std::string name, Params params, TriState condition_flag)
    : eval_(std::move(eval)),
      name_(std::move(name)),
      params_(std::move(params)),
      condition_flag_(condition_flag) {
    if (!eval_) throw std::invalid_argument("BernsteinFunction: null evaluation rule");
    triplet.validate();
    triplet_ = std::move(triplet);
    reject_degenerate(eval_, "BernsteinFunction", 1e-6, 1e6, 25);
}

double BernsteinFunction::operator()(double u) const {
    if (!(u > 0.0)) throw std::domain_error("BernsteinFunction: argument must be > 0");
    return eval_(u);
}

double BernsteinFunction::evaluate_from_triplet(double u) const {
    if (!(u > 0.0)) throw std::domain_error("BernsteinFunction: argument must be > 0");
    if (!triplet_) throw std::logic_error("BernsteinFunction: no triplet stored");
    return eval_triplet(*triplet_, u);
}

double evaluate(const BernsteinFunction& phi, double u) { return phi(u); }

double invert(const BernsteinFunction& phi, double v, double tol) {
    if (!(v > 0.0)) throw std::range_error("invert: target must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("invert: tol must be > 0");
    auto g = [&phi](double u) { return phi(u); };
    return solve_increasing(g, v, tol * std::max(1.0, v));
}

BernsteinFunction catalog(const std::string& name, const BernsteinFunction::Params& params) {
    using Params = BernsteinFunction::Params;
    if (name == "stable") {
        const double alpha = require_positive_param(params, "alpha");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("catalog stable: alpha must be in (0,1)");
        double scale;
        double levy_c;
        if (params.count("levy_c")) {
            levy_c = params.at("levy_c");
            if (!(levy_c > 0.0)) throw std::invalid_argument("catalog stable: levy_c must be > 0");
            scale = levy_c * std::tgamma(1.0 - alpha) / alpha;
        } else {
            scale = require_positive_param(params, "scale", 1.0);
            if (!(scale > 0.0)) throw std::invalid_argument("catalog stable: scale must be > 0");
            levy_c = scale * alpha / std::tgamma(1.0 - alpha);
        }
        LevyTriplet trip{0.0, [levy_c, alpha](double y) {
                             return levy_c * std::pow(y, -1.0 - alpha);
                         }};
        auto eval = [scale, alpha](double u) { return scale * std::pow(u, alpha); };
        return BernsteinFunction(eval, std::move(trip), "stable",
                                 Params{{"alpha", alpha}, {"scale", scale}, {"levy_c", levy_c}},
                                 TriState::yes);
    }
    if (name == "log") {
        LevyTriplet trip{0.0, [](double y) { return std::exp(-y) / y; }};
        return BernsteinFunction([](double u) { return std::log1p(u); }, std::move(trip), "log",
                                 Params{}, TriState::yes);
    }
    if (name == "gamma") {
        const double a = require_positive_param(params, "a", 1.0);
        const double b = require_positive_param(params, "b", 1.0);
        if (!(a > 0.0 && b > 0.0))
            throw std::invalid_argument("catalog gamma: a, b must be > 0");
        LevyTriplet trip{0.0, [a, b](double y) { return a * std::exp(-b * y) / y; }};
        return BernsteinFunction([a, b](double u) { return a * std::log1p(u / b); },
                                 std::move(trip), "gamma", Params{{"a", a}, {"b", b}},
                                 TriState::yes);
    }
    if (name == "stable-log-plus") {
        const double alpha = require_positive_param(params, "alpha");
        const double beta = require_positive_param(params, "beta", 0.0);
        if (!(alpha > 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0 - alpha))
            throw std::invalid_argument(
                "catalog stable-log-plus: need alpha in (0,1), beta in [0,1-alpha)");
        auto eval = [alpha, beta](double u) {
            return std::pow(u, alpha) * std::pow(std::log1p(u), beta);
        };
        return BernsteinFunction(eval, "stable-log-plus", Params{{"alpha", alpha}, {"beta", beta}},
                                 TriState::yes);
    }
    if (name == "stable-log-minus") {
        const double alpha = require_positive_param(params, "alpha");
        const double beta = require_positive_param(params, "beta");
        if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < alpha))
            throw std::invalid_argument(
                "catalog stable-log-minus: need 0 < beta < alpha < 1");
        auto eval = [alpha, beta](double u) {
            return std::pow(u, alpha) * std::pow(std::log1p(u), -beta);
        };
        return BernsteinFunction(eval, "stable-log-minus",
                                 Params{{"alpha", alpha}, {"beta", beta}}, TriState::yes);
    }
    if (name == "relativistic-like") {
        const double alpha = require_positive_param(params, "alpha");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("catalog relativistic-like: alpha must be in (0,1)");
        auto eval = [alpha](double u) { return u * std::pow(1.0 + u, -alpha); };
        return BernsteinFunction(eval, "relativistic-like", Params{{"alpha", alpha}},
                                 TriState::yes);
    }
    if (name == "compound-poisson-drift") {
        const double drift = require_positive_param(params, "drift", 0.0);
        const double rate = require_positive_param(params, "rate", 0.0);
        if (!(drift >= 0.0) || !(rate >= 0.0) || (drift == 0.0 && rate == 0.0))
            throw std::invalid_argument(
                "catalog compound-poisson-drift: need drift >= 0, rate >= 0, not both zero");
        const TriState flag = drift > 0.0 ? TriState::yes : TriState::no;
        if (params.count("jump_rate")) {
            const double eta = params.at("jump_rate");
            if (!(eta > 0.0))
                throw std::invalid_argument("catalog compound-poisson-drift: jump_rate must be > 0");
            auto eval = [drift, rate, eta](double u) { return drift * u + rate * u / (eta + u); };
            LevyTriplet trip{drift, [rate, eta](double y) { return rate * eta * std::exp(-eta * y); }};
            return BernsteinFunction(eval, std::move(trip), "compound-poisson-drift",
                                     Params{{"drift", drift}, {"rate", rate}, {"jump_rate", eta}},
                                     flag);
        }
        const double jump = require_positive_param(params, "jump", 1.0);
        if (!(jump > 0.0))
            throw std::invalid_argument("catalog compound-poisson-drift: jump must be > 0");
        auto eval = [drift, rate, jump](double u) {
            return drift * u - rate * std::expm1(-jump * u);
        };
        // fixed-size jumps are a point mass, not a density; no triplet representation
        return BernsteinFunction(eval, "compound-poisson-drift",
                                 Params{{"drift", drift}, {"rate", rate}, {"jump", jump}}, flag);
    }
    throw std::invalid_argument("catalog: unknown family '" + name + "'");
}

ConditionReport condition_diagnostics(const BernsteinFunction& phi, double lambda,
                                      const GridSpec& grid) {
    if (!(lambda > 1.0)) throw std::invalid_argument("condition_diagnostics: lambda must be > 1");
    if (!(grid.lo <= 1e-8 && grid.hi >= 1e8))
        throw std::invalid_argument("condition_diagnostics: grid must span at least [1e-8, 1e8]");
    const auto pts = geometric_grid(grid.lo, grid.hi, grid.n);
    ConditionReport rep;
    rep.lambda = lambda;
    rep.grid_lo = grid.lo;
    rep.grid_hi = grid.hi;
    const std::size_t quarter = pts.size() / 4;
    double ratio_log = std::numeric_limits<double>::infinity();
    for (std::size_t i = pts.size() - quarter; i < pts.size(); ++i)
        ratio_log = std::min(ratio_log, phi(pts[i]) / std::log(pts[i]));
    double doubling = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < quarter; ++i)
        doubling = std::min(doubling, phi(lambda * pts[i]) / phi(pts[i]));
    rep.ratio_log_liminf_proxy = ratio_log;
    rep.doubling_liminf_proxy = doubling;
    const bool proxies_ok = ratio_log > 0.0 && doubling > 1.0;
    if (!proxies_ok || phi.condition_flag() == TriState::no)
        rep.verdict = ConditionReport::Verdict::fail;
    else if (phi.condition_flag() == TriState::yes)
        rep.verdict = ConditionReport::Verdict::pass;
    else
        rep.verdict = ConditionReport::Verdict::inconclusive;
    return rep;
}

double doubling_index(const std::function<double(double)>& g, Endpoint endpoint, double lambda,
                      const GridSpec& grid) {
    if (!(lambda > 1.0)) throw std::invalid_argument("doubling_index: lambda must be > 1");
    const auto pts = geometric_grid(grid.lo, grid.hi, grid.n);
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : pts) {
        const double v = g(t);
        if (!(v > prev)) throw MonotonicityError("doubling_index: rule not strictly increasing");
        prev = v;
    }
    const std::size_t half = pts.size() / 2;
    const std::size_t begin = endpoint == Endpoint::zero ? 0 : pts.size() - half;
    const std::size_t end = endpoint == Endpoint::zero ? half : pts.size();
    double idx = std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) idx = std::min(idx, g(lambda * pts[i]) / g(pts[i]));
    return idx;
}

PowerFit power_envelope(const std::function<double(double)>& g, Endpoint endpoint,
                        const GridSpec& grid) {
    const auto pts = geometric_grid(grid.lo, grid.hi, grid.n);
    const std::size_t half = pts.size() / 2;
    const std::size_t begin = endpoint == Endpoint::zero ? 0 : pts.size() - half;
    const std::size_t end = endpoint == Endpoint::zero ? half : pts.size();
    std::vector<double> lx, ly;
    for (std::size_t i = begin; i < end; ++i) {
        const double v = g(pts[i]);
        if (!(v > 0.0)) throw std::domain_error("power_envelope: rule must be positive on grid");
        lx.push_back(std::log(pts[i]));
        ly.push_back(std::log(v));
    }
    const LineFit f = fit_line(lx, ly);
    return PowerFit{std::exp(f.intercept), f.slope};
}

}  // namespace subrate
