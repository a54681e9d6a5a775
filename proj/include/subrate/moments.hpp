#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "subrate/bernstein.hpp"
#include "subrate/parallel.hpp"
#include "subrate/subordinators.hpp"

namespace subrate {

enum class Method { mc, quadrature, closed_form };

struct MomentEstimate {
    double value = 0.0;
    double error = 0.0;  // Monte Carlo standard error or quadrature error estimate
    std::size_t n_or_nodes = 0;
    Method method = Method::closed_form;
    // log-domain companions; `value` may underflow to 0 while these stay exact
    double log_value = 0.0;
    double log_error = 0.0;
    bool variance_warning = false;  // mc only: standard error exceeds the estimate
};

// One of the three canonical non-increasing rate families on [0,inf) with values
// in (0,1], or a custom rule (validated non-increasing with r(0) <= 1).
class RateFunction {
  public:
    enum class Family { sub_exponential, algebraic, logarithmic, custom };

    static RateFunction sub_exponential(double theta, double delta);  // exp(-theta t^delta)
    static RateFunction algebraic(double beta);                       // (1+t)^-beta
    static RateFunction logarithmic(double gamma);                    // [1+log(1+t)]^-gamma
    static RateFunction custom(std::function<double(double)> eval);

    double operator()(double t) const { return eval_(t); }
    Family family() const { return family_; }
    double param1() const { return a_; }
    double param2() const { return b_; }

  private:
    RateFunction(Family f, double a, double b, std::function<double(double)> eval)
        : family_(f), a_(a), b_(b), eval_(std::move(eval)) {}
    Family family_;
    double a_, b_;
    std::function<double(double)> eval_;
};

// ---------------------------------------------------------------------------
// negative moments E S_t^{-beta}
// ---------------------------------------------------------------------------

// E S_t^{-beta} = Gamma(beta)^{-1} * int_0^inf e^{-t phi(u)} u^{beta-1} du, split at
// u0 = phi^{-1}(1/t).  Both pieces are integrated with the scale u0^beta factored
// out, so relative accuracy survives values far below the absolute tolerance.
// Throws DivergenceError naming the offending tail when the moment is infinite
// (e.g. log-type phi with t too small against beta).
MomentEstimate neg_moment_quadrature(const BernsteinFunction& phi, double beta, double t);

// Closed-form lower bound (e beta Gamma(beta))^{-1} [phi^{-1}(1/t)]^beta.
double neg_moment_lower_bound(const BernsteinFunction& phi, double beta, double t);

MomentEstimate neg_moment_mc(const SubordinatorSampler& sampler, double beta, double t,
                             std::size_t n, std::uint64_t stream_id = 0,
                             Exec ex = Exec::parallel);

// ---------------------------------------------------------------------------
// sub-exponential moments E e^{-theta S_t^delta}
// ---------------------------------------------------------------------------

// Empirical mean via log-sum-exp; for large t the linear value underflows to 0
// while log_value / log_error remain exact.
MomentEstimate subexp_moment_mc(const SubordinatorSampler& sampler, double theta, double delta,
                                double t, std::size_t n, std::uint64_t stream_id = 0,
                                Exec ex = Exec::parallel);

// ODE-comparison machinery: C1 = (1-1/e) c theta^{alpha/delta} / alpha,
// rho(u) = u [(1-log u)^{1/delta} - (-log u)^{1/delta}]^{-alpha},
// G(v) = -int_v^1 du/rho(u) = -y(-log v) with
// y(x) = int_0^x [(1+s)^{1/delta} - s^{1/delta}]^alpha ds.
struct OdeBoundKit {
    double theta = 0.0, delta = 0.0, c = 0.0, alpha = 0.0;
    double C1 = 0.0;

    double rho(double u) const;
    double y(double x) const;          // closed form for delta in {1, 1/2}, quadrature otherwise
    double y_inverse(double w) const;  // monotone root-finding
    double G(double v) const;          // strictly increasing, G(1) = 0, G(0+) = -inf
    double G_inverse(double w) const;  // w <= 0
};

OdeBoundKit build_ode_kit(double theta, double delta, double c, double alpha);

// G^{-1}(-C1 t): the sharp intermediate bound on E e^{-theta S_t^delta}.
double subexp_bound_ode(const OdeBoundKit& kit, double t);
double log_subexp_bound_ode(const OdeBoundKit& kit, double t);

// Fully explicit bound exp[-(C1 t / C2 - 1)^{delta/(alpha(1-delta)+delta)}] for
// t > 2 C2/C1, else 1.  C2 = delta^{-alpha} 2^{alpha(1-delta)/delta} max(1, delta/(alpha(1-delta)+delta)):
// (1+s)^{1/d}-s^{1/d} = (1/d) int_s^{1+s} u^{(1-d)/d} du <= (1/d) 2^{(1-d)/d} max(s^{(1-d)/d}, 1),
// so int_0^X [...]^a ds <= d^{-a} 2^{a(1-d)/d} (1 + int_1^X s^{a(1-d)/d} ds) <= C2 (1 + X^m),
// m = (a(1-d)+d)/d; inverting -C2(1+X^m) <= G(e^{-X}) gives the stated form.
double subexp_bound_closed(double theta, double delta, double c, double alpha, double t);
double log_subexp_bound_closed(double theta, double delta, double c, double alpha, double t);

// ---------------------------------------------------------------------------
// logarithmic moments E log^{-gamma}(1 + S_t)
// ---------------------------------------------------------------------------

// Empirical mean of min(1, log^{-gamma}(1+S)); the cap matches rate functions
// taking values in (0,1] and regularizes the S=0 atom.
MomentEstimate log_moment_mc(const SubordinatorSampler& sampler, double gamma, double t,
                             std::size_t n, std::uint64_t stream_id = 0,
                             Exec ex = Exec::parallel);

// fitted_C * log^{-gamma}(1 + t^{1/alpha}); fitted_C comes from the caller's
// density-envelope fit.
double log_moment_upper(double gamma, double c, double alpha, double t, double fitted_C);

// (E_log_1pS1/log2 + 1/alpha)^{-gamma} log^{-gamma}(1+t^{1/alpha}) for t >= 1 and
// (E_log_1pS1/log2)^{-gamma} log^{-gamma}(1+t^{1/alpha}) for t < 1.
double log_moment_lower(double gamma, double alpha, double t, double E_log_1pS1);

// ---------------------------------------------------------------------------
// rate transfer and rates
// ---------------------------------------------------------------------------

// Empirical mean of r(S_t): the universal transfer of a rate function through a
// subordinator.
MomentEstimate rate_subordinate(const RateFunction& r, const SubordinatorSampler& sampler,
                                double t, std::size_t n, std::uint64_t stream_id = 0,
                                Exec ex = Exec::parallel);

enum class TransferCase { a, b, c };

struct TransferParams {
    double theta = 0.0, delta = 0.0, c = 0.0, alpha = 0.0;  // case a
    double beta = 0.0;                                      // case b
    double gamma = 0.0;                                     // case c
};

// Transferred rates: a) exp[-fitted_C t^{delta/(alpha(1-delta)+delta)}],
// b) 1 ^ [phi^{-1}(1/t)]^beta (requires the growth/doubling flag on phi),
// c) 1 ^ log^{-gamma}(1+t).
double transferred_rate(TransferCase cse, const TransferParams& p, const BernsteinFunction* phi,
                     double t, double fitted_C = 1.0);

// ODE comparison bound G^{-1}(G(h0) - C t) for arbitrary positive non-decreasing
// rho on (0,1]; clamps to 0 when the bound leaves (0,1].
double ode_comparison_bound(double h0, double C, const std::function<double(double)>& rho, double t);

// ---------------------------------------------------------------------------
// elementary property checks
// ---------------------------------------------------------------------------

struct ConvexityReport {
    double min_first_difference = 0.0;
    double min_second_difference = 0.0;
    bool pass = false;
};

// Convexity/monotonicity witness for g(x) = x [(1-log x)^tau - (-log x)^tau]^{-alpha}
// on an ascending grid inside (0,1).  The grid must have non-decreasing spacing
// (geometric grids qualify); plain second differences then certify convexity.
ConvexityReport appendix_g_check(double tau, double alpha, const std::vector<double>& grid);

// log(1+tau*x) <= log(1+tau) log(1+x) / log 2 for tau in (0,1), x >= 0.
bool log_product_inequality_check(double tau, double x);

// log(1+x)/x > log(1+lambda)/lambda for 0 < x < lambda (x -> log(1+x)/x decreasing).
bool log_ratio_decreasing_check(double x, double lambda);

}  // namespace subrate
