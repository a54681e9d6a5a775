#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "subrate/errors.hpp"

namespace subrate {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

// Ordinary least squares of y against x.  Throws FitError when x has no variance.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("fit_line: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (!(det > 1e-14 * (n * sxx + sx * sx + 1.0)))
        throw FitError("fit_line: zero variance in abscissa");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

// Two-sample Kolmogorov-Smirnov statistic; inputs are modified (sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha) * sqrt((n+m)/(n*m)); c(0.01) = 1.628.
inline double ks_critical(double c_alpha, std::size_t n, std::size_t m) {
    return c_alpha * std::sqrt(static_cast<double>(n + m) /
                               (static_cast<double>(n) * static_cast<double>(m)));
}

inline double log_sum_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace subrate
