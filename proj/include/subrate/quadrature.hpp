#pragma once

#include <cstddef>
#include <functional>

namespace subrate {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    std::size_t max_intervals = 100000;  // adaptive bisections
    bool throw_on_failure = true;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    std::size_t nodes = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Integral over [a, infinity) by geometric window doubling: [a, a+w], [a+w, a+3w], ...
// Stops once a window contributes less than the tolerance relative to the running
// total.  If window contributions fail to decay within `max_windows`, the integral
// is declared divergent and a DivergenceError naming `tail_name` is thrown.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                   double first_window, const QuadOptions& opts = {},
                                   std::size_t max_windows = 96,
                                   const char* tail_name = "upper tail");

}  // namespace subrate
