#pragma once

#include <functional>

namespace subrate {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

// Expand a bracket for g(u) = target around `start` (> 0) by doubling in both
// directions, for strictly increasing g.  Throws std::range_error when the budget
// of doublings is exhausted (target outside the reachable range of g).
Bracket bracket_increasing(const std::function<double(double)>& g, double target,
                           double start = 1.0, int max_doublings = 200);

// Brent's method on [lo, hi] with g(lo), g(hi) of opposite sign.
double brent(const std::function<double(double)>& g, double lo, double hi, double tol_x,
             int max_iter = 200);

// Solve g(u) = v for strictly increasing g: bracket by doubling, then Brent.
// Stops when |g(u) - v| <= f_tol.
double solve_increasing(const std::function<double(double)>& g, double v, double f_tol,
                        double start = 1.0);

}  // namespace subrate
