#include "mqw/rng.hpp"

#include <stdexcept>

namespace mqw {

namespace {

// splitmix64 step (Vigna); also the state expander recommended for xoshiro.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = mix(seed, stream);
  s_[0] = splitmix64(x);
  s_[1] = splitmix64(x);
  s_[2] = splitmix64(x);
  s_[3] = splitmix64(x);
}

std::uint64_t ShotRng::mix(std::uint64_t a, std::uint64_t b) {
  // One splitmix64 round over a keyed combination; bijective in b for fixed a.
  std::uint64_t x = a ^ rotl(b, 17) ^ (b * 0xD1342543DE82EF95ULL);
  return splitmix64(x);
}

std::uint64_t ShotRng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double ShotRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int ShotRng::categorical(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty probability list");
  const double u = uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // absorbs rounding slack
}

}  // namespace mqw
