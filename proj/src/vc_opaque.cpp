#include "spivc/vc_opaque.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "spivc/hashing.hpp"

namespace spivc {

SharePair encode_shares(const BitMatrix& base, const BitMatrix& secret,
                        std::uint64_t seed, ShareAssignment assignment) {
  check_bits(base);
  check_bits(secret);
  check_same_dims(base.width, base.height, secret.width, secret.height,
                  "encode_shares");

  SharePair pair{base, base, base, secret, seed};

  if (assignment == ShareAssignment::kRandom) {
    for (int r = 0; r < base.height; ++r)
      for (int c = 0; c < base.width; ++c) {
        if (!secret.at(r, c)) continue;
        std::uint8_t k1 = std::uint8_t(orientation_bit(seed, r, c));
        pair.key1.at(r, c) = k1;
        pair.key2.at(r, c) = std::uint8_t(1 - k1);
      }
    return pair;
  }

  // Balanced: decide which key absorbs each modification, half and half
  // (odd counts leave the surplus on key2), then shuffle the assignment
  // deterministically so the split carries no spatial structure.
  std::vector<std::pair<int, int>> fg;
  for (int r = 0; r < base.height; ++r)
    for (int c = 0; c < base.width; ++c)
      if (secret.at(r, c)) fg.emplace_back(r, c);

  std::vector<std::uint8_t> key1_modified(fg.size());
  for (std::size_t i = 0; i < fg.size(); ++i)
    key1_modified[i] = i < (fg.size() + 1) / 2;
  for (std::size_t i = fg.size(); i > 1; --i) {
    std::size_t j = counter_hash(seed, kDomainShuffle, i - 1, 0) % i;
    std::swap(key1_modified[i - 1], key1_modified[j]);
  }

  for (std::size_t i = 0; i < fg.size(); ++i) {
    auto [r, c] = fg[i];
    std::uint8_t b = base.at(r, c);
    // The modified key flips away from the base; the other keeps it, which
    // still leaves the pair {0, 1}.
    pair.key1.at(r, c) = key1_modified[i] ? std::uint8_t(1 - b) : b;
    pair.key2.at(r, c) = key1_modified[i] ? b : std::uint8_t(1 - b);
  }
  return pair;
}

Image overlay(const BitMatrix& key1, const BitMatrix& key2) {
  check_bits(key1);
  check_bits(key2);
  check_same_dims(key1.width, key1.height, key2.width, key2.height, "overlay");
  Image out(key1.width, key1.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = double(key1.bits[i]) + double(key2.bits[i]);
  return out;
}

BitMatrix extract_secret_from_overlay(const Image& ov, double tau) {
  check_finite(ov, "overlay");
  if (tau < 0.0)
    throw std::invalid_argument("extract_secret_from_overlay: negative tau");
  BitMatrix out(ov.width, ov.height);
  for (std::size_t i = 0; i < ov.pixels.size(); ++i) {
    double v = ov.pixels[i];
    if (v < -tau || v > 2.0 + tau)
      throw std::invalid_argument(
          "extract_secret_from_overlay: value " + std::to_string(v) +
          " outside [-tau, 2+tau]");
    // Nearest level of {0, 1, 2}; the midpoints 0.5 and 1.5 round away
    // from 1 so only clear mixed dots count as secret.
    int level = v < 0.5 ? 0 : (v > 1.5 ? 2 : 1);
    out.bits[i] = level == 1;
  }
  return out;
}

namespace {

// One Lloyd-style refinement pass for the affine map v -> a*v + b fitted to
// the level set {0, 1, 2}: assign each value to its nearest level under the
// current map, then refit (a, b) to the assignment by least squares.  Runs
// until the map stops moving and reports the misfit in DATA units,
// sum((v - (level - b)/a)^2), so degenerate near-zero slopes score poorly
// instead of hiding behind a shrunken mapped scale.
struct AffineLevelFit {
  double a = 1.0;
  double b = 0.0;
  double data_misfit = std::numeric_limits<double>::infinity();
};

AffineLevelFit refine_affine_levels(const std::vector<double>& values,
                                    double a, double b) {
  const double n = double(values.size());
  for (int round = 0; round < 32; ++round) {
    double sxx = 0.0, sx = 0.0, sxy = 0.0, sy = 0.0;
    for (double v : values) {
      double mapped = a * v + b;
      double level = mapped < 0.5 ? 0.0 : (mapped > 1.5 ? 2.0 : 1.0);
      sxx += v * v;
      sx += v;
      sxy += v * level;
      sy += level;
    }
    double det = n * sxx - sx * sx;
    if (det <= 0.0) break;  // numerically constant; keep current map
    double na = (n * sxy - sx * sy) / det;
    double nb = (sy * sxx - sx * sxy) / det;
    if (std::abs(na - a) < 1e-12 && std::abs(nb - b) < 1e-12) break;
    a = na;
    b = nb;
  }

  AffineLevelFit fit;
  fit.a = a;
  fit.b = b;
  if (a != 0.0 && std::isfinite(a) && std::isfinite(b)) {
    double misfit = 0.0;
    for (double v : values) {
      double mapped = a * v + b;
      double level = mapped < 0.5 ? 0.0 : (mapped > 1.5 ? 2.0 : 1.0);
      double diff = v - (level - b) / a;
      misfit += diff * diff;
    }
    fit.data_misfit = misfit;
  }
  return fit;
}

}  // namespace

Image rescale_overlay(const Image& recon) {
  check_finite(recon, "rescale_overlay");
  auto [lo_it, hi_it] =
      std::minmax_element(recon.pixels.begin(), recon.pixels.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo))
    throw std::invalid_argument("rescale_overlay: constant image");

  // Affine map v -> a*v + b fitted to the level set {0, 1, 2} by a 1-D
  // three-center Lloyd iteration, tried from two deterministic starts.
  //
  // The range start maps [min, max] onto [0, 2]; it is exact for clean
  // level images but collapses once noise stretches the extremes: the
  // shrunken slope funnels every value into the middle bin and the refit
  // walks to a ~ 0.  The halves start instead splits the values at the
  // median and maps the two half-means onto the outer levels; half-means
  // move far less than extremes under noise, so the start lands near the
  // true slope whenever the outer levels carry most of the mass.  Keep
  // whichever converged fit explains the data better.
  AffineLevelFit best;
  {
    double a0 = 2.0 / (hi - lo);
    best = refine_affine_levels(recon.pixels, a0, -a0 * lo);
  }
  {
    std::vector<double> sorted = recon.pixels;
    std::sort(sorted.begin(), sorted.end());
    std::size_t half = sorted.size() / 2;
    double lo_mean =
        std::accumulate(sorted.begin(), sorted.begin() + half, 0.0) /
        double(half);
    double hi_mean = std::accumulate(sorted.begin() + half, sorted.end(), 0.0) /
                     double(sorted.size() - half);
    if (half > 0 && hi_mean > lo_mean) {
      double a0 = 2.0 / (hi_mean - lo_mean);
      AffineLevelFit alt =
          refine_affine_levels(recon.pixels, a0, -a0 * lo_mean);
      if (alt.data_misfit < best.data_misfit) best = alt;
    }
  }

  Image out(recon.width, recon.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = std::clamp(best.a * recon.pixels[i] + best.b, 0.0, 2.0);
  return out;
}

ModificationBudget modification_budget(const BitMatrix& secret,
                                       const qr::QrSymbol& symbol) {
  check_bits(secret);
  check_same_dims(secret.width, secret.height, symbol.matrix.width,
                  symbol.matrix.height, "modification_budget");

  std::vector<int> grid = qr::codeword_index_grid(symbol.version, symbol.ec_level);
  std::vector<int> owner = qr::codeword_block_of(symbol.version, symbol.ec_level);
  const qr::BlockLayout& layout =
      qr::block_layout(symbol.version, symbol.ec_level);

  int on_codewords = 0;
  std::set<int> touched;  // distinct corrupted codewords (worst case)
  for (int r = 0; r < secret.height; ++r)
    for (int c = 0; c < secret.width; ++c) {
      if (!secret.at(r, c)) continue;
      int cw = grid[std::size_t(r) * secret.width + c];
      if (cw < 0) continue;  // function module or remainder bit
      ++on_codewords;
      touched.insert(cw);
    }

  std::vector<int> per_block(layout.data_lengths.size(), 0);
  for (int cw : touched) per_block[owner[cw]]++;

  ModificationBudget budget;
  budget.per_key_expected = on_codewords / 2.0;
  budget.per_block_worst =
      per_block.empty() ? 0 : *std::max_element(per_block.begin(), per_block.end());
  budget.ok = budget.per_block_worst <= layout.ec_per_block / 2;
  return budget;
}

}  // namespace spivc
