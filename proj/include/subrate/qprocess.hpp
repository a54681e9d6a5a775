#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subrate/moments.hpp"
#include "subrate/parallel.hpp"
#include "subrate/subordinators.hpp"

namespace subrate {

// Star-shaped chain on {0, 1, ..., N}: q_00 = -lambda_0, q_0i = lambda_0 * p_i,
// q_i0 = lambda_i = -q_ii.  The invariant distribution is exact:
//   pi_0 = (1 + lambda_0 * sum_j p_j / lambda_j)^{-1},  pi_i = pi_0 lambda_0 p_i / lambda_i.
// Immutable after build.
class QProcessModel {
  public:
    // lambda_rule(i) for i = 0..N, p_rule(i) for i = 1..N; p is renormalized to sum 1.
    static QProcessModel build(const std::function<double(std::size_t)>& lambda_rule,
                               const std::function<double(std::size_t)>& p_rule, std::size_t N);
    static QProcessModel from_vectors(std::vector<double> lambda, std::vector<double> p);

    std::size_t truncation() const { return N_; }
    std::size_t dim() const { return N_ + 1; }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& pi() const { return pi_; }
    double max_rate() const { return Lambda_; }

    // Row x of e^{tQ} by uniformization: Poisson(Lambda*t)-weighted powers of the
    // stochastic matrix I + Q/Lambda, truncated when the Poisson tail drops below
    // 1e-14.  Row sums to 1 within 1e-12.
    std::vector<double> transition_row(double t, std::size_t x) const;

    // v * e^{tQ} for a (sub-)probability vector v; same machinery.
    std::vector<double> propagate(double t, const std::vector<double>& v) const;

    // Smallest s (up to a factor 2) with ||row_x(s) - pi||_1 < tol, by doubling.
    double mixing_time(std::size_t x, double tol = 1e-12) const;

  private:
    QProcessModel() = default;
    std::size_t N_ = 0;
    std::vector<double> lambda_;  // size N+1, lambda_[0] = lambda_0
    std::vector<double> p_;       // size N+1, p_[0] unused = 0, renormalized
    std::vector<double> pi_;      // size N+1
    double Lambda_ = 0.0;
};

// || row - pi ||_f = sum_i f(i) |row_i - pi_i| on the truncated space; the countable
// supremum over |g| <= f is attained at g = f * sign(row - pi), which turns the
// abstract norm into this weighted l1 sum.  With f identically 1 this equals twice
// the usual total variation distance.
double f_norm_distance(const std::vector<double>& row, const std::vector<double>& pi,
                       const std::vector<double>& f);

enum class ControlCase { a, b, c };

struct ControlParams {
    double theta = 0.0;
    double q = 0.0;     // case a only
    double beta = 0.0;  // case b
    double gamma = 0.0; // case c
};

struct ControlFunction {
    std::vector<double> f;
    double truncated_summability = 0.0;  // the case's summability sum over the truncated range
};

// Control vectors f >= 1 per case:
//   a) (1 + lambda_i^{-1/2} e^{theta^2/lambda_i})^{1-q}
//   b) 1 + lambda_i^{beta-theta}
//   c) [1 + log(1 v lambda_i^{-1})]^{theta-gamma}
// Throws std::overflow_error when case a's exponent overflows.
ControlFunction control_function(ControlCase cse, const ControlParams& params,
                                 const QProcessModel& model);

struct SubordinateRow {
    std::vector<double> row;  // sums to 1 within 1e-10
    std::vector<double> se;   // per-entry standard errors
};

// Monte Carlo mixture (1/n) sum_k row_x(S^{(k)}) over subordinator draws.  Draws
// beyond the model's mixing time contribute pi directly (error < 1e-13 per draw,
// the same order as the Poisson truncation of the rows themselves).
SubordinateRow subordinate_row(const QProcessModel& model, const SubordinatorSampler& sampler,
                               double t, std::size_t x, std::size_t n,
                               std::uint64_t stream_id = 0, Exec ex = Exec::parallel);

// Cross-check for the gamma clock, whose mixing density is available in closed
// form: int row_x(s) * Gamma(a*t, b)-density(s) ds over geometric panels, with the
// mass beyond the mixing time folded into pi.
std::vector<double> subordinate_row_gamma_quadrature(const QProcessModel& model, double a,
                                                     double b, double t, std::size_t x,
                                                     std::size_t panels = 48);

struct DistanceCurve {
    std::vector<double> t_grid;
    std::vector<double> distances;
    std::vector<double> se;  // 0 for the exact semigroup
    std::string f_label;
    double fitted_exponent = 0.0;
    double fit_residual = 0.0;
    bool fitted = false;
};

// f-norm distance along t_grid for the plain (sampler == nullptr) or subordinated
// semigroup.  Subordinated points use stream_id_base + point index, so the curve is
// deterministic given (seed, streams).
DistanceCurve distance_sweep(const QProcessModel& model, const SubordinatorSampler* sampler,
                             const std::vector<double>& f, std::size_t x,
                             const std::vector<double>& t_grid, std::size_t n,
                             std::uint64_t stream_id_base = 0, Exec ex = Exec::parallel);

struct RateFitResult {
    double exponent = 0.0;
    double residual = 0.0;
};

// Fitted decay exponent: algebraic = slope of log d vs log t; sub-exponential =
// slope of log(-log d) vs log t; logarithmic = slope of log d vs log log t.
RateFitResult rate_fit(const DistanceCurve& curve, RateFunction::Family family);

}  // namespace subrate
