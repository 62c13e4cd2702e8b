#pragma once

#include <cstdint>
#include <vector>

#include "spivc/raster.hpp"

namespace spivc {

// A run of binary illumination patterns, regenerable from
// (width, height, count, seed) alone.
struct PatternSequence {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<BitMatrix> patterns;

  int count() const { return int(patterns.size()); }
};

// I.i.d. fair bits: pattern n at cell (x, y) depends only on
// (seed, n, x, y), so a shorter run is always a bit-exact prefix of a
// longer one with the same seed.
PatternSequence generate_patterns(int width, int height, int count,
                                  std::uint64_t seed);

}  // namespace spivc
