#pragma once

#include <functional>
#include <vector>

namespace subrate {

// Non-decreasing differentiable concave rate driver on [1, inf) with derivative
// tending to 0.  Closed-form families keep H and the rate in log domain, so huge
// times never overflow.
class ConcaveRateDriver {
  public:
    enum class Family { power, log_damped, custom };

    static ConcaveRateDriver power(double c1, double kappa);       // c1 * x^kappa, kappa in (0,1)
    static ConcaveRateDriver log_damped(double c1, double p);      // c1 * x * (1+p+log x)^-p, p > 0
    static ConcaveRateDriver custom(std::function<double(double)> eval);

    double operator()(double x) const;
    Family family() const { return family_; }
    double c1() const { return c1_; }
    double expo() const { return expo_; }  // kappa (power) or p (log_damped)

    // sampled slope at 1e8 over sampled slope at 1; tends to 0 for admissible
    // drivers but only like a power of x, so it is reported, not enforced
    double slope_decay_ratio() const;

  private:
    ConcaveRateDriver(Family f, double c1, double expo, std::function<double(double)> eval);
    Family family_;
    double c1_, expo_;
    std::function<double(double)> eval_;
};

// H(u) = int_1^u dx / phi(x), u >= 1; closed form for the named families.
double H(const ConcaveRateDriver& driver, double u);

// Inverse of H by monotone root-finding (closed form for the named families);
// round trip |H(H^{-1}(t)) - t| <= 1e-9 max(1,t).  Throws std::range_error when the
// inverse exceeds the double range.
double H_inverse(const ConcaveRateDriver& driver, double t);

// r(t) = 1 ^ (phi(H^{-1}(t)))^{-q}, q in (0,1).
double drift_rate(const ConcaveRateDriver& driver, double q, double t);
// log r(t), exact for the named families even where H^{-1} overflows.
double log_drift_rate(const ConcaveRateDriver& driver, double q, double t);

// 1-D diffusion generator data: A V = b V' + (1/2) sigma^2 V''.
struct LyapunovSpec1D {
    std::function<double(double)> drift_b;
    std::function<double(double)> sigma;
    std::function<double(double)> V;
    std::function<double(double)> V1;  // optional analytic V'
    std::function<double(double)> V2;  // optional analytic V''
    double petite_radius = 1.0;        // M: the indicator set is {|x| <= M}
    double b_const = 0.0;
    double q = 0.5;
};

// b(x) V'(x) + sigma^2(x) V''(x) / 2; central differences with step
// 1e-5 * max(1,|x|) when analytic derivatives are absent.
double generator_apply_1d(const LyapunovSpec1D& spec, double x);

struct DriftReport {
    std::vector<double> violating_x;
    double worst_margin = 0.0;  // min over grid of rhs - lhs; negative = violation
    bool pass = false;
};

// Pointwise check of A V(x) <= -phi(V(x)) + b_const * 1_{|x| <= M} over the grid.
DriftReport drift_inequality_check(const LyapunovSpec1D& spec, const ConcaveRateDriver& driver,
                                   const std::vector<double>& grid);

}  // namespace subrate
