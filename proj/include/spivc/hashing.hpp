#pragma once

#include <cstdint>

namespace spivc {

// Every random decision in the library is a pure function of a 64-bit seed
// and a handful of counter words, so any value can be regenerated in
// isolation and sequences agree on shared prefixes regardless of how many
// later elements are produced.
//
// The mixer is the splitmix64 finalizer; words are absorbed one per round:
//
//   h = seed
//   h = mix64((h + 0x9e3779b97f4a7c15) ^ w)   for each word w
//
// Streams that would otherwise share a seed are separated by a leading
// domain tag word.

constexpr std::uint64_t kHashGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t w0,
                                     std::uint64_t w1, std::uint64_t w2) {
  std::uint64_t h = seed;
  h = mix64((h + kHashGamma) ^ w0);
  h = mix64((h + kHashGamma) ^ w1);
  h = mix64((h + kHashGamma) ^ w2);
  return h;
}

enum : std::uint64_t {
  kDomainPatternBit = 1,         // illumination pattern cells
  kDomainShareOrientation = 2,   // static key share flips
  kDomainPatternOrientation = 3, // per-pattern share flips
  kDomainGaussian = 4,           // measurement noise
  kDomainShuffle = 5,            // reserved for permutations
};

constexpr std::uint64_t cell_key(int r, int c) {
  return (std::uint64_t(std::uint32_t(r)) << 32) | std::uint32_t(c);
}

// Fair coin for pattern n, cell (r, c): low bit of the mix.
constexpr int pattern_bit(std::uint64_t seed, std::uint64_t n, int r, int c) {
  return int(counter_hash(seed, kDomainPatternBit, n, cell_key(r, c)) & 1u);
}

constexpr int orientation_bit(std::uint64_t seed, int r, int c) {
  return int(counter_hash(seed, kDomainShareOrientation, 0, cell_key(r, c)) & 1u);
}

constexpr int pattern_orientation_bit(std::uint64_t seed, std::uint64_t n, int r,
                                      int c) {
  return int(counter_hash(seed, kDomainPatternOrientation, n, cell_key(r, c)) & 1u);
}

// Uniform double in (0, 1]: top 53 bits, never zero so log() stays finite.
constexpr double unit_open_double(std::uint64_t h) {
  return double((h >> 11) + 1) * 0x1.0p-53;
}

// Standard normal deviate, deterministic in (seed, n). Box-Muller on two
// independent uniforms drawn from the noise domain.
double gaussian(std::uint64_t seed, std::uint64_t n);

}  // namespace spivc
