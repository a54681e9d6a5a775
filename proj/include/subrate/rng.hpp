#pragma once

#include <cstdint>

namespace subrate {

// Counter-based splittable generator.  Every (seed, stream_id, draw_index) triple
// owns an independent substream, so a draw's value never depends on how many other
// draws were made, which thread made them, or in what order.  Rejection samplers
// simply consume more of the substream.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t draw_index);

    std::uint64_t next_u64();
    double next_unit();  // uniform on the open interval (0, 1)
    double next_exp();   // standard exponential
    double next_normal();

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

// Positive alpha-stable variate (Kanter): E exp(-u S) = exp(-u^alpha), alpha in (0,1).
double draw_positive_stable(CounterRng& rng, double alpha);

// Gamma(shape, rate) by Marsaglia-Tsang; shape < 1 via the boost Gamma(shape+1) * U^{1/shape}.
double draw_gamma(CounterRng& rng, double shape, double rate);

// Poisson(mean); inversion for small means, PTRS transformed rejection for mean >= 10.
std::uint64_t draw_poisson(CounterRng& rng, double mean);

}  // namespace subrate
