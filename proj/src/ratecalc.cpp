#include "subrate/ratecalc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "subrate/grid.hpp"
#include "subrate/quadrature.hpp"
#include "subrate/roots.hpp"

namespace subrate {

namespace {
const QuadOptions kHQuad{1e-12, 1e-9, 100000, true};
}

ConcaveRateDriver::ConcaveRateDriver(Family f, double c1, double expo,
                                     std::function<double(double)> eval)
    : family_(f), c1_(c1), expo_(expo), eval_(std::move(eval)) {
    // hard invariants: positive, non-decreasing, midpoint-concave on [1, 1e8]
    const auto pts = geometric_grid(1.0, 1e8, 33);
    double prev = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = eval_(pts[i]);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("ConcaveRateDriver: rule must be positive and finite");
        if (v < prev)
            throw std::invalid_argument("ConcaveRateDriver: rule must be non-decreasing");
        if (i + 1 < pts.size()) {
            const double hi = eval_(pts[i + 1]);
            const double mid = eval_(0.5 * (pts[i] + pts[i + 1]));
            if (v + hi - 2.0 * mid > 1e-10 * (std::fabs(v) + std::fabs(hi)))
                throw std::invalid_argument("ConcaveRateDriver: rule must be concave");
        }
        prev = v;
    }
    // the derivative may not grow; genuine decay (ratio -> 0) is only a power of x
    // for admissible drivers, so the ratio is reported rather than thresholded
    if (!(slope_decay_ratio() <= 1.0 + 1e-9))
        throw std::invalid_argument("ConcaveRateDriver: derivative must not increase");
}

ConcaveRateDriver ConcaveRateDriver::power(double c1, double kappa) {
    if (!(c1 > 0.0) || !(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("ConcaveRateDriver::power: need c1 > 0, kappa in (0,1)");
    return ConcaveRateDriver(Family::power, c1, kappa,
                             [c1, kappa](double x) { return c1 * std::pow(x, kappa); });
}

ConcaveRateDriver ConcaveRateDriver::log_damped(double c1, double p) {
    if (!(c1 > 0.0) || !(p > 0.0))
        throw std::invalid_argument("ConcaveRateDriver::log_damped: need c1 > 0, p > 0");
    return ConcaveRateDriver(Family::log_damped, c1, p, [c1, p](double x) {
        return c1 * x * std::pow(1.0 + p + std::log(x), -p);
    });
}

ConcaveRateDriver ConcaveRateDriver::custom(std::function<double(double)> eval) {
    if (!eval) throw std::invalid_argument("ConcaveRateDriver: null rule");
    return ConcaveRateDriver(Family::custom, 0.0, 0.0, std::move(eval));
}

double ConcaveRateDriver::operator()(double x) const {
    if (!(x >= 1.0)) throw std::domain_error("ConcaveRateDriver: argument must be >= 1");
    return eval_(x);
}

double ConcaveRateDriver::slope_decay_ratio() const {
    auto slope = [this](double x) {
        const double h = 1e-4 * x;
        return (eval_(x + h) - eval_(x)) / h;
    };
    const double s1 = slope(1.0);
    if (!(s1 > 0.0)) return std::numeric_limits<double>::infinity();
    return slope(1e8) / s1;
}

double H(const ConcaveRateDriver& driver, double u) {
    if (!(u >= 1.0)) throw std::domain_error("H: u must be >= 1");
    if (u == 1.0) return 0.0;
    switch (driver.family()) {
        case ConcaveRateDriver::Family::power: {
            const double k = driver.expo();
            return (std::pow(u, 1.0 - k) - 1.0) / (driver.c1() * (1.0 - k));
        }
        case ConcaveRateDriver::Family::log_damped: {
            const double p = driver.expo();
            return (std::pow(1.0 + p + std::log(u), 1.0 + p) - std::pow(1.0 + p, 1.0 + p)) /
                   (driver.c1() * (1.0 + p));
        }
        case ConcaveRateDriver::Family::custom:
            return integrate([&driver](double x) { return 1.0 / driver(x); }, 1.0, u, kHQuad)
                .value;
    }
    return 0.0;
}

namespace {

// log H^{-1}(t) for the closed-form families, finite even when H^{-1} overflows
double log_H_inverse_closed(const ConcaveRateDriver& driver, double t) {
    switch (driver.family()) {
        case ConcaveRateDriver::Family::power: {
            const double k = driver.expo();
            return std::log1p(driver.c1() * (1.0 - k) * t) / (1.0 - k);
        }
        case ConcaveRateDriver::Family::log_damped: {
            const double p = driver.expo();
            const double base = driver.c1() * (1.0 + p) * t + std::pow(1.0 + p, 1.0 + p);
            return std::pow(base, 1.0 / (1.0 + p)) - (1.0 + p);
        }
        case ConcaveRateDriver::Family::custom:
            break;
    }
    throw std::logic_error("log_H_inverse_closed: custom family");
}

}  // namespace

double H_inverse(const ConcaveRateDriver& driver, double t) {
    if (!(t >= 0.0)) throw std::domain_error("H_inverse: t must be >= 0");
    if (t == 0.0) return 1.0;
    if (driver.family() != ConcaveRateDriver::Family::custom) {
        const double lu = log_H_inverse_closed(driver, t);
        if (lu > 709.0) throw std::range_error("H_inverse: result exceeds double range");
        return std::exp(lu);
    }
    return solve_increasing([&driver](double u) { return H(driver, u); }, t,
                            1e-9 * std::max(1.0, t), 2.0);
}

double log_drift_rate(const ConcaveRateDriver& driver, double q, double t) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("drift_rate: q must be in (0,1)");
    if (!(t >= 0.0)) throw std::domain_error("drift_rate: t must be >= 0");
    double log_phi_u;
    if (driver.family() == ConcaveRateDriver::Family::custom) {
        log_phi_u = std::log(driver(H_inverse(driver, t)));
    } else if (driver.family() == ConcaveRateDriver::Family::power) {
        const double k = driver.expo();
        log_phi_u = std::log(driver.c1()) + k * log_H_inverse_closed(driver, t);
    } else {
        const double p = driver.expo();
        const double lu = log_H_inverse_closed(driver, t);
        log_phi_u = std::log(driver.c1()) + lu - p * std::log(1.0 + p + lu);
    }
    return std::min(0.0, -q * log_phi_u);
}

double drift_rate(const ConcaveRateDriver& driver, double q, double t) {
    return std::exp(log_drift_rate(driver, q, t));
}

double generator_apply_1d(const LyapunovSpec1D& spec, double x) {
    if (!spec.drift_b || !spec.sigma || !spec.V)
        throw std::invalid_argument("generator_apply_1d: incomplete spec");
    double v1, v2;
    if (spec.V1 && spec.V2) {
        v1 = spec.V1(x);
        v2 = spec.V2(x);
    } else {
        const double scale = std::max(1.0, std::fabs(x));
        const double h1 = 1e-5 * scale;
        v1 = (spec.V(x + h1) - spec.V(x - h1)) / (2.0 * h1);
        // the second difference cancels ~eps*V/h^2; a wider power-of-two step keeps
        // that noise near the truncation error instead of swamping it
        const double h2 = std::ldexp(scale, -13);
        v2 = (spec.V(x + h2) - 2.0 * spec.V(x) + spec.V(x - h2)) / (h2 * h2);
    }
    const double s = spec.sigma(x);
    return spec.drift_b(x) * v1 + 0.5 * s * s * v2;
}

DriftReport drift_inequality_check(const LyapunovSpec1D& spec, const ConcaveRateDriver& driver,
                                   const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("drift_inequality_check: empty grid");
    DriftReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (double x : grid) {
        const double vx = spec.V(x);
        if (!(vx >= 1.0))
            throw std::invalid_argument("drift_inequality_check: V must be >= 1 on the grid");
        const double lhs = generator_apply_1d(spec, x);
        const double rhs =
            -driver(vx) + (std::fabs(x) <= spec.petite_radius ? spec.b_const : 0.0);
        const double margin = rhs - lhs;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -1e-9 * (1.0 + std::fabs(rhs))) rep.violating_x.push_back(x);
    }
    rep.pass = rep.violating_x.empty();
    return rep;
}

}  // namespace subrate
