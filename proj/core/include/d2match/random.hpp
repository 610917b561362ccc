#pragma once

#include <cstdint>

namespace d2match {

/// xoshiro256** seeded through splitmix64. Self-contained so that decision
/// sequences are bit-reproducible across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// One fair bit. Draws are buffered from next_u64, most significant first,
  /// so an algorithm that consumes one bit per random decision advances the
  /// underlying generator only once per 64 decisions.
  bool next_bit();

  /// Uniform in [0, n), n >= 1. Unbiased via rejection sampling.
  std::uint64_t below(std::uint64_t n);

  /// Uniform in [0, 1).
  double next_double();

 private:
  std::uint64_t s_[4];
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

/// Master seed plus deterministic per-trial stream derivation. Streams for
/// distinct trial indices behave independently; identical (seed, trial)
/// always yields the identical stream, which is the only cross-thread
/// contract the Monte Carlo layer relies on.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t master_seed) : master_seed_(master_seed) {}

  std::uint64_t master_seed() const { return master_seed_; }
  RandomStream stream(std::uint64_t trial_index) const;

 private:
  std::uint64_t master_seed_;
};

}  // namespace d2match
