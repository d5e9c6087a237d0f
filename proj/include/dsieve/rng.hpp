#pragma once

#include <cstdint>
#include <string_view>

namespace dsieve {

/// SplitMix64 generator with a deterministic child-stream rule.
///
/// Output: state += 0x9E3779B97F4A7C15, then the standard SplitMix64 finalizer.
/// Child streams: `child(key)` seeds a new generator with
/// mix64(seed ^ mix64(key + 0x632BE59BD9B4E019)) where `seed` is the value
/// this generator was constructed with (not its current state), so children
/// are independent of how many draws the parent has made. String keys are
/// hashed with 64-bit FNV-1a first.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound); bound > 0. Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (next() >> 63) != 0; }

  Rng child(std::uint64_t key) const;
  Rng child(std::string_view key) const;
  Rng child(std::string_view key, std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view text);

}  // namespace dsieve
