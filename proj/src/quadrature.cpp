#include "subrate/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "subrate/errors.hpp"

namespace subrate {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
const double kKronrodNode[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
const double kKronrodWeight[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights aligned with the even Kronrod nodes (0, 2, 4, 6).
const double kGaussWeight[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

struct Panel {
    double a, b, value, error;
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0;
    const double f0 = f(mid);
    k15 += kKronrodWeight[0] * f0;
    g7 += kGaussWeight[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kKronrodNode[i];
        const double fi = f(mid + dx) + f(mid - dx);
        k15 += kKronrodWeight[i] * fi;
        if (i % 2 == 0) g7 += kGaussWeight[i / 2] * fi;
    }
    k15 *= half;
    g7 *= half;
    const double diff = std::fabs(k15 - g7);
    // standard (200*diff)^1.5 sharpening of the Kronrod error estimate
    double err = diff;
    if (diff > 0.0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
    return Panel{a, b, k15, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
    Panel p0 = gk15(f, a, b);
    res.nodes = 15;
    double total = p0.value, toterr = p0.error;
    heap.push(p0);
    std::size_t used = 1;
    while (toterr > std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)) &&
           used < opts.max_intervals) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
            toterr -= worst.error;
            continue;
        }
        Panel l = gk15(f, worst.a, mid);
        Panel r = gk15(f, mid, worst.b);
        res.nodes += 30;
        ++used;
        total += l.value + r.value - worst.value;
        toterr += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    res.value = total;
    res.error = std::max(toterr, 0.0);
    res.converged = res.error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    if (!res.converged && opts.throw_on_failure)
        throw IntegrationError("adaptive quadrature did not converge: error estimate " +
                               std::to_string(res.error) + " after " +
                               std::to_string(res.nodes) + " nodes");
    return res;
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                   double first_window, const QuadOptions& opts,
                                   std::size_t max_windows, const char* tail_name) {
    QuadResult res;
    double lo = a;
    double w = first_window;
    double prev_contrib = 0.0;
    std::size_t growing = 0;
    QuadOptions local = opts;
    local.throw_on_failure = false;
    for (std::size_t k = 0; k < max_windows; ++k) {
        QuadResult part = integrate(f, lo, lo + w, local);
        res.value += part.value;
        res.error += part.error;
        res.nodes += part.nodes;
        const double contrib = std::fabs(part.value);
        const double gate = std::max(opts.abs_tol, opts.rel_tol * std::fabs(res.value));
        // settled: this window is negligible and either the previous one was too or
        // the envelope just collapsed by three orders of magnitude
        if (k > 0 && contrib <= gate &&
            (prev_contrib <= gate || contrib <= 1e-3 * prev_contrib)) {
            res.converged = true;
            return res;
        }
        // windows whose contributions keep growing signal a divergent tail
        if (k > 0 && contrib > prev_contrib * 1.000001) {
            if (++growing >= 8)
                throw DivergenceError(std::string("integral diverges on the ") + tail_name);
        } else {
            growing = 0;
        }
        prev_contrib = contrib;
        lo += w;
        w *= 2.0;
    }
    if (opts.throw_on_failure)
        throw DivergenceError(std::string("integral did not settle on the ") + tail_name);
    return res;
}

}  // namespace subrate
