#include "d2match/random.hpp"

namespace d2match {

namespace {

// splitmix64 (Steele, Lea, Flood): seeds the main generator and derives
// per-trial stream keys.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

// xoshiro256** (Blackman, Vigna).
std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

bool RandomStream::next_bit() {
  if (bits_left_ == 0) {
    bit_buffer_ = next_u64();
    bits_left_ = 64;
  }
  const bool bit = (bit_buffer_ >> 63) != 0;
  bit_buffer_ <<= 1;
  --bits_left_;
  return bit;
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Classic rejection: draw from the largest multiple of n below 2^64.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % n;
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomStream RandomSource::stream(std::uint64_t trial_index) const {
  // Mix (master_seed, trial_index) into one 64-bit stream key.
  std::uint64_t sm = master_seed_;
  std::uint64_t key = splitmix64(sm);
  sm = key ^ (trial_index * 0x9e3779b97f4a7c15ULL + 0x5851f42d4c957f2dULL);
  key = splitmix64(sm);
  return RandomStream(key);
}

}  // namespace d2match
