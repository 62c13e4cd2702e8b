#pragma once

#include <cstdint>

#include "spivc/qr.hpp"
#include "spivc/raster.hpp"

namespace spivc {

// Scheme 1: a secret bit-image splits a base symbol into two opaque visual
// keys. Where the secret is 0 both keys copy the base; where it is 1 the
// keys take the values {0, 1} in a seed-derived orientation, so stacking
// them yields intensity 1 exactly on the secret's support.

struct SharePair {
  BitMatrix key1;
  BitMatrix key2;
  BitMatrix base;
  BitMatrix secret;
  std::uint64_t seed = 0;
};

enum class ShareAssignment {
  kRandom,    // each foreground dot's orientation is a fair stateless bit
  kBalanced,  // modifications split between the keys to within one
};

SharePair encode_shares(const BitMatrix& base, const BitMatrix& secret,
                        std::uint64_t seed,
                        ShareAssignment assignment = ShareAssignment::kRandom);

// Pointwise sum of the stacked keys: 0 (both dark), 2 (both light),
// 1 (mixed) — the last occurring exactly on the secret's support.
Image overlay(const BitMatrix& key1, const BitMatrix& key2);

// Classifies each overlay value to its nearest level in {0, 1, 2}; the bit
// is 1 where level 1 wins. Values outside [-tau, 2+tau] are rejected.
BitMatrix extract_secret_from_overlay(const Image& ov, double tau = 0.25);

// Least-squares affine map of a reconstructed overlay onto the {0, 1, 2}
// level set (reconstruction recovers intensities only up to gain/offset).
// Alternates nearest-level classification and affine refitting from a
// min/max initialization, then clamps to [0, 2].
Image rescale_overlay(const Image& recon);

struct ModificationBudget {
  double per_key_expected = 0.0;  // foreground dots on codewords / 2
  int per_block_worst = 0;        // corrupted codewords if one key takes all
  bool ok = true;                 // every block within floor(ec/2)
};

// How much symbol damage a secret inflicts: counts foreground modules lying
// on codeword regions, maps them to blocks, and compares the worst-case
// per-block corrupted-codeword count against the correction capacity.
ModificationBudget modification_budget(const BitMatrix& secret,
                                       const qr::QrSymbol& symbol);

}  // namespace spivc
