#include "subrate/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace subrate {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t draw_index) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (stream_id + kGolden));
    k = mix64(k ^ (draw_index + kGolden));
    key_ = k;
}

std::uint64_t CounterRng::next_u64() {
    ctr_ += kGolden;
    return mix64(key_ + ctr_);
}

double CounterRng::next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_exp() { return -std::log(next_unit()); }

double CounterRng::next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double draw_positive_stable(CounterRng& rng, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("draw_positive_stable: alpha must be in (0,1)");
    const double v = kPi * rng.next_unit();
    const double e = rng.next_exp();
    const double ratio = (1.0 - alpha) / alpha;
    const double a = std::sin(alpha * v) *
                     std::pow(std::sin((1.0 - alpha) * v), ratio) /
                     std::pow(std::sin(v), 1.0 / alpha);
    return a * std::pow(e, -ratio);
}

double draw_gamma(CounterRng& rng, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::domain_error("draw_gamma: shape and rate must be positive");
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.next_unit(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.next_normal();
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = rng.next_unit();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
}

std::uint64_t draw_poisson(CounterRng& rng, double mean) {
    if (mean < 0.0) throw std::domain_error("draw_poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // inversion by exponential inter-arrival times
        std::uint64_t n = 0;
        double acc = rng.next_exp();
        while (acc < mean) {
            ++n;
            acc += rng.next_exp();
        }
        return n;
    }
    // PTRS transformed rejection (Hormann), valid for mean >= 10
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.next_unit() - 0.5;
        const double v = rng.next_unit();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + kf * loglam - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace subrate
