#pragma once

#include <cstdint>

namespace fbmsde::rng {

/// splitmix64 mixing step.
std::uint64_t mix(std::uint64_t x);

/// Seed for the substream of a given (path, dimension, tag) triple under a
/// master seed. Substreams are independent of scheduling order.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t path,
                             std::uint64_t dim, std::uint64_t tag = 0);

/// Deterministic stream of standard normal variates (xoshiro-free: a
/// splitmix64 counter generator with Box-Muller). Bit-identical output for a
/// given seed on any platform with IEEE doubles.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : state_(seed) {}

    double next();

  private:
    double uniform();  // in (0, 1]
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fbmsde::rng
