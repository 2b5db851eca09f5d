#pragma once

#include <cstdint>
#include <random>

namespace pfsim {

std::uint64_t splitmix64(std::uint64_t x);

// mt19937_64 with a fixed, portable mapping to doubles.  Child streams are
// derived by hashing (seed, stream id) so parallel chains never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), eng_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return eng_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  int below(int k) { return static_cast<int>(uniform() * k); }
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace pfsim
