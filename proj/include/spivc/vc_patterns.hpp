#pragma once

#include <cstdint>
#include <vector>

#include "spivc/patterns.hpp"
#include "spivc/raster.hpp"

namespace spivc {

// Scheme 2: the secret hides in a pair of illumination-pattern sequences.
// Background cells agree across the pair for every pattern; on the secret's
// support each pattern pair carries complementary bits, so the superposed
// sequence is the constant 1 there and twice the base bit elsewhere.

struct PatternSharePair {
  PatternSequence seq_a;
  PatternSequence seq_b;
  BitMatrix secret;
  std::uint64_t base_seed = 0;
  std::uint64_t orient_seed = 0;
};

// Start both sequences from generate_patterns(base_seed); on foreground
// cells, pattern n gets a fresh fair orientation bit from
// (orient_seed, n, x, y) for sequence A and its complement for B.
PatternSharePair encode_pattern_shares(int width, int height, int count,
                                       const BitMatrix& secret,
                                       std::uint64_t base_seed,
                                       std::uint64_t orient_seed);

// Pointwise sums seq_a[n] + seq_b[n], values in {0, 1, 2}.
std::vector<Image> superpose_sequences(const PatternSharePair& pair);

// Exact pattern-domain recovery: a cell is foreground iff its superposed
// value is 1 (checked on pattern 0; background sums are never 1).
BitMatrix reveal_secret_from_patterns(const PatternSharePair& pair);

// Detector-side recovery from reconstructions: fits recon_combined ≈
// a*recon_single + b over all pixels, Otsu-thresholds the absolute
// residual, and returns as foreground the class that is flatter in
// recon_combined (the secret region reconstructs without spatial detail).
// Flatness is measured per class over same-class 3x3 windows so thin
// strokes are not polluted by adjacent background. Returns all-zero when
// the residual is effectively constant (nothing is hidden).
BitMatrix reveal_secret_from_reconstruction(const Image& recon_combined,
                                            const Image& recon_single);

// Fallback without a reference reconstruction: Otsu directly on the
// combined reconstruction's intensities, keeping the dimmer class (the
// hidden region never modulates the detector, so it reconstructs near the
// DC floor while the background keeps the doubled object signal). Weaker
// than the two-image detector — it needs the hidden region to be separable
// from the background by brightness alone.
BitMatrix reveal_secret_from_reconstruction(const Image& recon_combined);

}  // namespace spivc
