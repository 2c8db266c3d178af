#pragma once

#include <cstdint>
#include <random>

namespace edgeclust {

// Seeded generator with platform-independent derived distributions.
// std::*_distribution output is implementation-defined, so uniform and
// normal draws are computed here from raw 64-bit words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller (one cached spare).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Independent child stream; deterministic in (parent state, tag).
  Rng split(std::uint64_t tag);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace edgeclust
