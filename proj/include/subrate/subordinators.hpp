#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subrate/bernstein.hpp"
#include "subrate/parallel.hpp"
#include "subrate/rng.hpp"

namespace subrate {

// A batch is a pure function of (family, params, t, n, seed, stream_id); growing n
// appends draws without disturbing the prefix.
struct SampleBatch {
    double t = 0.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

struct JumpDistribution {
    enum class Kind { fixed, exponential };
    Kind kind = Kind::fixed;
    double value = 1.0;  // jump size (fixed) or rate (exponential)

    static JumpDistribution fixed(double size);
    static JumpDistribution exponential(double rate);
    double draw(CounterRng& rng) const;
    // E e^{-uJ}
    double laplace(double u) const;
};

enum class Family { stable, gamma, compound_poisson_drift };

// Reproducible draws of S_t for one subordinator family, carrying the matching
// Laplace exponent.  Immutable; sampling is a pure function of
// (params, t, n, seed, stream_id) and therefore thread-count independent.
class SubordinatorSampler {
  public:
    // phi(u) = scale * u^alpha.
    static SubordinatorSampler stable(double alpha, double scale, std::uint64_t seed);
    // parametrized by the Levy density constant c (density c*y^{-1-alpha});
    // the Laplace scale is c * Gamma(1-alpha) / alpha.
    static SubordinatorSampler stable_from_levy(double alpha, double c, std::uint64_t seed);
    // phi(u) = a * log(1 + u/b); S_t ~ Gamma(shape a*t, rate b).
    static SubordinatorSampler gamma(double a, double b, std::uint64_t seed);
    // S_t = drift*t + sum of N_t jumps, N_t ~ Poisson(rate*t); rate = 0 with
    // drift > 0 degenerates to the deterministic subordinator S_t = drift*t.
    static SubordinatorSampler compound_poisson_drift(double drift, double rate,
                                                      JumpDistribution jump, std::uint64_t seed);

    double draw_one(double t, std::uint64_t stream_id, std::uint64_t index) const;
    SampleBatch sample(double t, std::size_t n, std::uint64_t stream_id,
                       Exec ex = Exec::parallel) const;

    const BernsteinFunction& phi() const { return phi_; }
    Family family() const { return family_; }
    std::uint64_t seed() const { return seed_; }
    double param1() const { return p1_; }  // alpha | a | drift
    double param2() const { return p2_; }  // scale | b | rate

  private:
    SubordinatorSampler(Family f, double p1, double p2, JumpDistribution jump,
                        BernsteinFunction phi, std::uint64_t seed);

    Family family_;
    double p1_;
    double p2_;
    JumpDistribution jump_;
    BernsteinFunction phi_;
    std::uint64_t seed_;
};

SampleBatch sample_stable(double alpha, double scale, double t, std::size_t n,
                          std::uint64_t seed, std::uint64_t stream_id);
SampleBatch sample_gamma(double a, double b, double t, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream_id);
SampleBatch sample_compound_poisson_drift(double drift, double rate,
                                          const std::function<double(CounterRng&)>& jump_sampler,
                                          double t, std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream_id);

// Shape t * s^{-1-alpha} * exp(-t * s^{-alpha}) of the stable transition-density
// envelope; the multiplicative constant is left to the caller to fit empirically.
double stable_density_bound(double alpha, double c, double t, double s);

// Columns: index, value.  Deterministic formatting (%.17g).
void write_batch_csv(const SampleBatch& batch, const std::string& path);

}  // namespace subrate
