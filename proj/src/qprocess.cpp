#include "subrate/qprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "subrate/errors.hpp"
#include "subrate/stats.hpp"

namespace subrate {

namespace {
constexpr double kPoissonTail = 1e-14;
}

QProcessModel QProcessModel::build(const std::function<double(std::size_t)>& lambda_rule,
                                   const std::function<double(std::size_t)>& p_rule,
                                   std::size_t N) {
    if (N < 1) throw std::invalid_argument("QProcessModel: need N >= 1");
    std::vector<double> lambda(N + 1), p(N);
    for (std::size_t i = 0; i <= N; ++i) lambda[i] = lambda_rule(i);
    for (std::size_t i = 1; i <= N; ++i) p[i - 1] = p_rule(i);
    return from_vectors(std::move(lambda), std::move(p));
}

QProcessModel QProcessModel::from_vectors(std::vector<double> lambda, std::vector<double> p) {
    if (lambda.size() < 2 || p.size() + 1 != lambda.size())
        throw std::invalid_argument("QProcessModel: need lambda of size N+1 and p of size N");
    for (double l : lambda)
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("QProcessModel: rates must be positive and finite");
    double psum = 0.0;
    for (double w : p) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("QProcessModel: weights must be positive and finite");
        psum += w;
    }
    if (!(psum > 0.0)) throw std::invalid_argument("QProcessModel: weights sum to zero");

    QProcessModel m;
    m.N_ = p.size();
    m.lambda_ = std::move(lambda);
    m.p_.assign(m.N_ + 1, 0.0);
    for (std::size_t i = 1; i <= m.N_; ++i) m.p_[i] = p[i - 1] / psum;
    m.Lambda_ = *std::max_element(m.lambda_.begin(), m.lambda_.end());

    double s = 0.0;
    for (std::size_t i = 1; i <= m.N_; ++i) s += m.p_[i] / m.lambda_[i];
    const double pi0 = 1.0 / (1.0 + m.lambda_[0] * s);
    m.pi_.assign(m.N_ + 1, 0.0);
    m.pi_[0] = pi0;
    for (std::size_t i = 1; i <= m.N_; ++i)
        m.pi_[i] = pi0 * m.lambda_[0] * m.p_[i] / m.lambda_[i];
    return m;
}

std::vector<double> QProcessModel::propagate(double t, const std::vector<double>& v) const {
    if (!(t >= 0.0)) throw std::domain_error("QProcessModel: t must be >= 0");
    if (v.size() != dim()) throw std::invalid_argument("QProcessModel: vector size mismatch");
    const double w = Lambda_ * t;
    if (w == 0.0) return v;

    // Poisson(w) window with both tails below kPoissonTail
    const double spread = 10.0 * std::sqrt(w) + 40.0;
    const std::size_t k_hi = static_cast<std::size_t>(std::ceil(w + spread));
    const double log_w = std::log(w);

    // M = I + Q/Lambda, kept sparse by the star shape
    std::vector<double> keep(dim()), to0(dim()), from0(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        to0[i] = lambda_[i] / Lambda_;
        keep[i] = 1.0 - to0[i];
        from0[i] = lambda_[0] * p_[i] / Lambda_;
    }

    std::vector<double> cur = v, nxt(dim()), out(dim(), 0.0);
    double lp = -w;  // log Poisson pmf, advanced incrementally
    for (std::size_t k = 0; k <= k_hi; ++k) {
        if (k > 0) {
            lp += log_w - std::log(static_cast<double>(k));
            double inflow0 = 0.0;
            const double cur0 = cur[0];
            for (std::size_t i = 1; i <= N_; ++i) inflow0 += cur[i] * to0[i];
            nxt[0] = cur0 * keep[0] + inflow0;
            for (std::size_t i = 1; i <= N_; ++i) nxt[i] = cur0 * from0[i] + cur[i] * keep[i];
            cur.swap(nxt);
        }
        if (lp > -709.0) {
            const double pk = std::exp(lp);
            for (std::size_t j = 0; j < dim(); ++j) out[j] += pk * cur[j];
        }
    }
    return out;
}

std::vector<double> QProcessModel::transition_row(double t, std::size_t x) const {
    if (x >= dim()) throw std::invalid_argument("QProcessModel: state out of range");
    std::vector<double> v(dim(), 0.0);
    v[x] = 1.0;
    return propagate(t, v);
}

double QProcessModel::mixing_time(std::size_t x, double tol) const {
    // The row itself carries rounding of order (Lambda*s)*eps, so the measured
    // distance bottoms out near that floor; once the exponential decrease stalls
    // there (well below any Monte Carlo resolution), accept the current s.  Models
    // that have not mixed within the cost cap get +inf: no short-circuit at all.
    double s = 1.0 / Lambda_;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 60; ++i) {
        if (Lambda_ * s > 5e5) return std::numeric_limits<double>::infinity();
        const std::vector<double> row = transition_row(s, x);
        double d = 0.0;
        for (std::size_t j = 0; j < dim(); ++j) d += std::fabs(row[j] - pi_[j]);
        if (d < tol) return s;
        if (d < 1e-9 && d > 0.25 * prev) return s;
        prev = d;
        s *= 2.0;
    }
    return std::numeric_limits<double>::infinity();
}

double f_norm_distance(const std::vector<double>& row, const std::vector<double>& pi,
                       const std::vector<double>& f) {
    if (row.size() != pi.size() || f.size() != pi.size())
        throw std::invalid_argument("f_norm_distance: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!(f[i] >= 1.0)) throw std::domain_error("f_norm_distance: control values must be >= 1");
        d += f[i] * std::fabs(row[i] - pi[i]);
    }
    return d;
}

ControlFunction control_function(ControlCase cse, const ControlParams& params,
                                 const QProcessModel& model) {
    const auto& lambda = model.lambda();
    const auto& p = model.p();
    ControlFunction out;
    out.f.resize(model.dim());
    switch (cse) {
        case ControlCase::a: {
            if (!(params.theta > 0.0) || !(params.q >= 0.0 && params.q <= 1.0))
                throw std::invalid_argument("control_function a: need theta > 0, q in [0,1]");
            const double th2 = params.theta * params.theta;
            for (std::size_t i = 0; i < model.dim(); ++i) {
                const double expo = th2 / lambda[i];
                if (expo > 700.0)
                    throw std::overflow_error(
                        "control_function a: exp(theta^2/lambda) overflows; use a smaller theta "
                        "or a larger minimum rate");
                out.f[i] = std::pow(1.0 + std::exp(expo) / std::sqrt(lambda[i]), 1.0 - params.q);
            }
            for (std::size_t i = 1; i < model.dim(); ++i)
                out.truncated_summability += p[i] * std::max(1.0, 1.0 / lambda[i]) *
                                             std::exp(th2 / lambda[i]) / std::sqrt(lambda[i]);
            break;
        }
        case ControlCase::b: {
            if (!(params.theta >= 0.0) || !(params.beta >= 0.0 && params.beta <= params.theta))
                throw std::invalid_argument("control_function b: need 0 <= beta <= theta");
            for (std::size_t i = 0; i < model.dim(); ++i)
                out.f[i] = 1.0 + std::pow(lambda[i], params.beta - params.theta);
            for (std::size_t i = 1; i < model.dim(); ++i)
                out.truncated_summability += p[i] * std::pow(lambda[i], -1.0 - params.theta);
            break;
        }
        case ControlCase::c: {
            if (!(params.theta >= 0.0) || !(params.gamma >= 0.0 && params.gamma <= params.theta))
                throw std::invalid_argument("control_function c: need 0 <= gamma <= theta");
            for (std::size_t i = 0; i < model.dim(); ++i) {
                const double base = 1.0 + std::log(std::max(1.0, 1.0 / lambda[i]));
                out.f[i] = std::pow(base, params.theta - params.gamma);
            }
            for (std::size_t i = 1; i < model.dim(); ++i) {
                const double inv = std::max(1.0, 1.0 / lambda[i]);
                out.truncated_summability += p[i] * inv * std::pow(std::log(inv), params.theta);
            }
            break;
        }
    }
    return out;
}

SubordinateRow subordinate_row(const QProcessModel& model, const SubordinatorSampler& sampler,
                               double t, std::size_t x, std::size_t n, std::uint64_t stream_id,
                               Exec ex) {
    if (n < 1) throw std::invalid_argument("subordinate_row: n must be >= 1");
    if (x >= model.dim()) throw std::invalid_argument("subordinate_row: state out of range");
    const std::size_t dim = model.dim();
    const double s_mix = model.mixing_time(x);
    const std::vector<double>& pi = model.pi();
    std::vector<double> sum, sumsq;
    blocked_row_moments(ex, n, dim, [&](std::size_t i, double* row) {
        const double s = sampler.draw_one(t, stream_id, i);
        if (s >= s_mix) {
            std::memcpy(row, pi.data(), dim * sizeof(double));
        } else {
            const std::vector<double> r = model.transition_row(s, x);
            std::memcpy(row, r.data(), dim * sizeof(double));
        }
    }, sum, sumsq);
    SubordinateRow out;
    out.row.resize(dim);
    out.se.resize(dim);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < dim; ++j) {
        out.row[j] = sum[j] / dn;
        double var = 0.0;
        if (n > 1) var = std::max(0.0, (sumsq[j] - sum[j] * out.row[j]) / (dn - 1.0));
        out.se[j] = std::sqrt(var / dn);
    }
    return out;
}

std::vector<double> subordinate_row_gamma_quadrature(const QProcessModel& model, double a,
                                                     double b, double t, std::size_t x,
                                                     std::size_t panels) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("gamma quadrature: a, b must be > 0");
    if (!(t > 0.0)) throw std::domain_error("gamma quadrature: t must be > 0");
    if (panels < 4) throw std::invalid_argument("gamma quadrature: need >= 4 panels");
    const double shape = a * t;
    const double lognorm = shape * std::log(b) - std::lgamma(shape);
    auto log_density = [&](double s) { return lognorm + (shape - 1.0) * std::log(s) - b * s; };

    const double s_mix = model.mixing_time(x);
    // cover the gamma mass up to both the distribution's own tail and s_mix
    const double s_hi = std::min(s_mix, (shape + 40.0 * std::sqrt(shape) + 40.0) / b);
    // mass below s_lo, ~ (b s_lo)^{a t}, is folded into the tail remainder; keep
    // it negligible for shapes of order one (the cross-check regime)
    const double s_lo = s_hi * 1e-18;

    // Gauss-Kronrod nodes reused panel-wise; geometric panels absorb the s^{a t - 1}
    // endpoint behaviour
    static const double nodes[15] = {-0.991455371120813, -0.949107912342759, -0.864864423359769,
                                     -0.741531185599394, -0.586087235467691, -0.405845151377397,
                                     -0.207784955007898, 0.0,                0.207784955007898,
                                     0.405845151377397,  0.586087235467691,  0.741531185599394,
                                     0.864864423359769,  0.949107912342759,  0.991455371120813};
    static const double weights[15] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
        0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
        0.104790010322250, 0.063092092629979, 0.022935322010529};

    std::vector<double> out(model.dim(), 0.0);
    double mass = 0.0;
    const double ratio = std::pow(s_hi / s_lo, 1.0 / static_cast<double>(panels));
    double lo = s_lo;
    for (std::size_t p = 0; p < panels; ++p) {
        const double hi = p + 1 == panels ? s_hi : lo * ratio;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int k = 0; k < 15; ++k) {
            const double s = mid + half * nodes[k];
            const double w = weights[k] * half * std::exp(log_density(s));
            if (w == 0.0) continue;
            const std::vector<double> row = model.transition_row(s, x);
            for (std::size_t j = 0; j < model.dim(); ++j) out[j] += w * row[j];
            mass += w;
        }
        lo = hi;
    }
    // remaining mass sits beyond s_hi, where the row is pi to working precision
    const double rest = std::max(0.0, 1.0 - mass);
    for (std::size_t j = 0; j < model.dim(); ++j) out[j] += rest * model.pi()[j];
    return out;
}

DistanceCurve distance_sweep(const QProcessModel& model, const SubordinatorSampler* sampler,
                             const std::vector<double>& f, std::size_t x,
                             const std::vector<double>& t_grid, std::size_t n,
                             std::uint64_t stream_id_base, Exec ex) {
    if (t_grid.empty()) throw std::invalid_argument("distance_sweep: empty t grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("distance_sweep: t grid must be strictly increasing");
    DistanceCurve curve;
    curve.t_grid = t_grid;
    curve.f_label = sampler ? "subordinated" : "plain";
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (sampler) {
            SubordinateRow sr =
                subordinate_row(model, *sampler, t_grid[k], x, n, stream_id_base + k, ex);
            curve.distances.push_back(f_norm_distance(sr.row, model.pi(), f));
            // conservative bound: the f-weighted sum of per-entry standard errors
            double se = 0.0;
            for (std::size_t j = 0; j < f.size(); ++j) se += f[j] * sr.se[j];
            curve.se.push_back(se);
        } else {
            curve.distances.push_back(f_norm_distance(model.transition_row(t_grid[k], x),
                                                      model.pi(), f));
            curve.se.push_back(0.0);
        }
    }
    return curve;
}

RateFitResult rate_fit(const DistanceCurve& curve, RateFunction::Family family) {
    if (curve.t_grid.size() < 6) throw FitError("rate_fit: need at least 6 grid points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        const double t = curve.t_grid[i];
        const double d = curve.distances[i];
        if (!(d > 0.0)) throw FitError("rate_fit: distances must be positive");
        switch (family) {
            case RateFunction::Family::algebraic:
                xs.push_back(std::log(t));
                ys.push_back(std::log(d));
                break;
            case RateFunction::Family::sub_exponential: {
                if (!(d < 1.0)) throw FitError("rate_fit: need distances in (0,1) for this family");
                xs.push_back(std::log(t));
                ys.push_back(std::log(-std::log(d)));
                break;
            }
            case RateFunction::Family::logarithmic: {
                if (!(t > 1.0)) throw FitError("rate_fit: need t > 1 for the logarithmic family");
                xs.push_back(std::log(std::log(t)));
                ys.push_back(std::log(d));
                break;
            }
            case RateFunction::Family::custom:
                throw FitError("rate_fit: no fit form for custom rate families");
        }
    }
    const LineFit f = fit_line(xs, ys);
    return RateFitResult{f.slope, f.rms_residual};
}

}  // namespace subrate
