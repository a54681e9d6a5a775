#include "subrate/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace subrate {

Bracket bracket_increasing(const std::function<double(double)>& g, double target,
                           double start, int max_doublings) {
    if (!(start > 0.0)) throw std::invalid_argument("bracket_increasing: start must be > 0");
    double lo = start, hi = start;
    double flo = g(lo), fhi = flo;
    if (flo > target) {
        for (int i = 0; i < max_doublings && flo > target; ++i) {
            hi = lo;
            fhi = flo;
            lo *= 0.5;
            flo = g(lo);
        }
        if (flo > target)
            throw std::range_error("bracket_increasing: target " + std::to_string(target) +
                                   " below reachable range");
    } else {
        for (int i = 0; i < max_doublings && fhi < target; ++i) {
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = g(hi);
        }
        if (fhi < target)
            throw std::range_error("bracket_increasing: target " + std::to_string(target) +
                                   " above reachable range");
    }
    return Bracket{lo, hi, flo, fhi};
}

double brent(const std::function<double(double)>& g, double lo, double hi, double tol_x,
             int max_iter) {
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("brent: root not bracketed");
    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol_x;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = g(b);
    }
    return b;
}

double solve_increasing(const std::function<double(double)>& g, double v, double f_tol,
                        double start) {
    Bracket br = bracket_increasing(g, v, start);
    if (std::fabs(br.f_lo - v) <= f_tol) return br.lo;
    if (std::fabs(br.f_hi - v) <= f_tol) return br.hi;
    auto h = [&](double u) { return g(u) - v; };
    double u = brent(h, br.lo, br.hi, 0.0);
    // Brent terminates on the x-interval; polish against the f-tolerance.
    for (int i = 0; i < 8 && std::fabs(g(u) - v) > f_tol; ++i) {
        const double gl = g(br.lo) - v;
        const double gu = g(u) - v;
        if ((gl > 0.0) != (gu > 0.0)) br.hi = u; else br.lo = u;
        u = 0.5 * (br.lo + br.hi);
    }
    return u;
}

}  // namespace subrate
