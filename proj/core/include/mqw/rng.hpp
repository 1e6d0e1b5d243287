#pragma once

#include <cstdint>
#include <span>

namespace mqw {

// Splittable per-shot random stream: xoshiro256++ whose state is filled by a
// splitmix64 chain keyed on (seed, stream). Streams for distinct (seed, stream)
// pairs are statistically independent, so shots can run in any order or thread
// layout and merge deterministically.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();  // [0, 1), 53-bit

  // One uniform draw; true with probability p. p = 0 must not consume a draw
  // at call sites that guard on it (stream stability), so callers check first.
  bool bernoulli(double p) { return uniform() < p; }

  // Index into a cumulative scan of probs (sums to ~1); one uniform draw.
  int categorical(std::span<const double> probs);

  // Key derivation for nested substreams (e.g. per sweep point).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t s_[4];
};

}  // namespace mqw
