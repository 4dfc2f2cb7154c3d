#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sbmrate {

// Random stream used by every sampler and randomized estimator.
//
// Streams are derived, never shared: a stream is identified by a list of
// 64-bit keys (master seed, cell id, trial index, purpose, ...). The keys are
// folded through SplitMix64 into a single 64-bit state that seeds a
// std::mt19937_64 engine. Uniform doubles take the top 53 bits of one engine
// draw, so results do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng derive(std::initializer_list<std::uint64_t> keys);

  // A child stream keyed on this stream's seed plus `key`; does not advance
  // this stream.
  [[nodiscard]] Rng split(std::uint64_t key) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sbmrate
