#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subrate {

// n points geometrically spaced on [lo, hi], endpoints included.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("geometric_grid: need 0 < lo < hi");
    if (n < 2) throw std::invalid_argument("geometric_grid: need n >= 2");
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (!(hi > lo)) throw std::invalid_argument("linear_grid: need lo < hi");
    if (n < 2) throw std::invalid_argument("linear_grid: need n >= 2");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

}  // namespace subrate
