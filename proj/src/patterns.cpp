#include "spivc/patterns.hpp"

#include <stdexcept>

#include "spivc/hashing.hpp"

namespace spivc {

PatternSequence generate_patterns(int width, int height, int count,
                                  std::uint64_t seed) {
  check_dims(width, height);
  if (count <= 0) throw std::invalid_argument("pattern count must be positive");

  PatternSequence seq;
  seq.width = width;
  seq.height = height;
  seq.seed = seed;
  seq.patterns.reserve(count);
  for (int n = 0; n < count; ++n) {
    BitMatrix m(width, height);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        m.at(r, c) = std::uint8_t(pattern_bit(seed, std::uint64_t(n), r, c));
    seq.patterns.push_back(std::move(m));
  }
  return seq;
}

}  // namespace spivc
