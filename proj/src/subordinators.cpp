#include "subrate/subordinators.hpp"

#include <cmath>
#include <stdexcept>

#include "subrate/csv.hpp"

namespace subrate {

JumpDistribution JumpDistribution::fixed(double size) {
    if (!(size > 0.0)) throw std::domain_error("JumpDistribution: jump size must be > 0");
    return JumpDistribution{Kind::fixed, size};
}

JumpDistribution JumpDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::domain_error("JumpDistribution: jump rate must be > 0");
    return JumpDistribution{Kind::exponential, rate};
}

double JumpDistribution::draw(CounterRng& rng) const {
    return kind == Kind::fixed ? value : rng.next_exp() / value;
}

double JumpDistribution::laplace(double u) const {
    return kind == Kind::fixed ? std::exp(-value * u) : value / (value + u);
}

SubordinatorSampler::SubordinatorSampler(Family f, double p1, double p2, JumpDistribution jump,
                                         BernsteinFunction phi, std::uint64_t seed)
    : family_(f), p1_(p1), p2_(p2), jump_(jump), phi_(std::move(phi)), seed_(seed) {}

SubordinatorSampler SubordinatorSampler::stable(double alpha, double scale, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("SubordinatorSampler::stable: alpha must be in (0,1)");
    if (!(scale > 0.0))
        throw std::domain_error("SubordinatorSampler::stable: scale must be > 0");
    BernsteinFunction phi =
        catalog("stable", {{"alpha", alpha}, {"scale", scale}});
    return SubordinatorSampler(Family::stable, alpha, scale, JumpDistribution{}, std::move(phi),
                               seed);
}

SubordinatorSampler SubordinatorSampler::stable_from_levy(double alpha, double c,
                                                          std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(c > 0.0))
        throw std::domain_error("SubordinatorSampler::stable_from_levy: bad parameters");
    return stable(alpha, c * std::tgamma(1.0 - alpha) / alpha, seed);
}

SubordinatorSampler SubordinatorSampler::gamma(double a, double b, std::uint64_t seed) {
    if (!(a > 0.0 && b > 0.0))
        throw std::domain_error("SubordinatorSampler::gamma: a, b must be > 0");
    BernsteinFunction phi = catalog("gamma", {{"a", a}, {"b", b}});
    return SubordinatorSampler(Family::gamma, a, b, JumpDistribution{}, std::move(phi), seed);
}

SubordinatorSampler SubordinatorSampler::compound_poisson_drift(double drift, double rate,
                                                                JumpDistribution jump,
                                                                std::uint64_t seed) {
    if (!(drift >= 0.0)) throw std::domain_error("compound_poisson_drift: drift must be >= 0");
    if (!(rate >= 0.0) || (rate == 0.0 && drift == 0.0))
        throw std::domain_error("compound_poisson_drift: need rate >= 0, not both rate and drift zero");
    BernsteinFunction::Params p{{"drift", drift}, {"rate", rate}};
    if (jump.kind == JumpDistribution::Kind::fixed)
        p["jump"] = jump.value;
    else
        p["jump_rate"] = jump.value;
    BernsteinFunction phi = catalog("compound-poisson-drift", p);
    return SubordinatorSampler(Family::compound_poisson_drift, drift, rate, jump, std::move(phi),
                               seed);
}

double SubordinatorSampler::draw_one(double t, std::uint64_t stream_id,
                                     std::uint64_t index) const {
    if (!(t >= 0.0)) throw std::domain_error("SubordinatorSampler: t must be >= 0");
    if (t == 0.0) return 0.0;
    CounterRng rng(seed_, stream_id, index);
    switch (family_) {
        case Family::stable:
            // self-similarity: S_t = (scale*t)^{1/alpha} * S_1 with unit normalization
            return std::pow(p2_ * t, 1.0 / p1_) * draw_positive_stable(rng, p1_);
        case Family::gamma:
            return draw_gamma(rng, p1_ * t, p2_);
        case Family::compound_poisson_drift: {
            double s = p1_ * t;
            if (p2_ > 0.0) {
                const std::uint64_t njumps = draw_poisson(rng, p2_ * t);
                for (std::uint64_t k = 0; k < njumps; ++k) s += jump_.draw(rng);
            }
            return s;
        }
    }
    return 0.0;
}

SampleBatch SubordinatorSampler::sample(double t, std::size_t n, std::uint64_t stream_id,
                                        Exec ex) const {
    if (n < 1) throw std::invalid_argument("SubordinatorSampler::sample: n must be >= 1");
    SampleBatch batch;
    batch.t = t;
    batch.seed = seed_;
    batch.stream_id = stream_id;
    batch.values.resize(n);
    double* out = batch.values.data();
    parallel_for(ex, n, [&, out](std::size_t i) { out[i] = draw_one(t, stream_id, i); });
    return batch;
}

SampleBatch sample_stable(double alpha, double scale, double t, std::size_t n,
                          std::uint64_t seed, std::uint64_t stream_id) {
    return SubordinatorSampler::stable(alpha, scale, seed).sample(t, n, stream_id);
}

SampleBatch sample_gamma(double a, double b, double t, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream_id) {
    return SubordinatorSampler::gamma(a, b, seed).sample(t, n, stream_id);
}

SampleBatch sample_compound_poisson_drift(double drift, double rate,
                                          const std::function<double(CounterRng&)>& jump_sampler,
                                          double t, std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream_id) {
    if (!(drift >= 0.0)) throw std::domain_error("sample_compound_poisson_drift: drift must be >= 0");
    if (!(rate >= 0.0) || (rate == 0.0 && drift == 0.0))
        throw std::domain_error("sample_compound_poisson_drift: need rate >= 0, not both zero");
    SampleBatch batch;
    batch.t = t;
    batch.seed = seed;
    batch.stream_id = stream_id;
    batch.values.resize(n);
    parallel_for(Exec::parallel, n, [&](std::size_t i) {
        CounterRng rng(seed, stream_id, i);
        double s = drift * t;
        if (rate > 0.0 && t > 0.0) {
            const std::uint64_t njumps = draw_poisson(rng, rate * t);
            for (std::uint64_t k = 0; k < njumps; ++k) {
                const double j = jump_sampler(rng);
                if (!(j > 0.0)) throw std::domain_error("jump_sampler produced a non-positive jump");
                s += j;
            }
        }
        batch.values[i] = s;
    });
    return batch;
}

void write_batch_csv(const SampleBatch& batch, const std::string& path) {
    CsvWriter csv(path, {"index", "value"});
    for (std::size_t i = 0; i < batch.values.size(); ++i)
        csv.row(std::vector<double>{static_cast<double>(i), batch.values[i]});
}

double stable_density_bound(double alpha, double c, double t, double s) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("stable_density_bound: alpha in (0,1)");
    if (!(c > 0.0)) throw std::domain_error("stable_density_bound: c must be > 0");
    if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("stable_density_bound: s, t must be > 0");
    return t * std::pow(s, -1.0 - alpha) * std::exp(-t * std::pow(s, -alpha));
}

}  // namespace subrate
