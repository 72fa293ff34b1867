#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rampart {

// Deterministic PRNG (xoshiro256** seeded via splitmix64). We avoid the
// <random> distributions on purpose: their output is implementation-defined,
// and every artifact in this project must be reproducible from its seed.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of randomness.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);
  bool coin() { return (next_u64() >> 63) != 0; }

  // Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Exponential with the given mean.
  double exponential(double mean);
  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derives an independent stream seed for a named pipeline stage, so that
  // adding or reordering stages never perturbs the draws of another stage.
  static uint64_t derive(uint64_t seed, std::string_view tag);
  static uint64_t derive(uint64_t seed, std::string_view tag, uint64_t index);

 private:
  uint64_t s_[4];
};

}  // namespace rampart
