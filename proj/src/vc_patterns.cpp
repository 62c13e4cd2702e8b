#include "spivc/vc_patterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spivc/hashing.hpp"
#include "spivc/stats.hpp"

namespace spivc {

namespace {

// Flatness of `img` over one class of a two-way segmentation, measured so
// that the other class never contaminates it: each class pixel contributes
// the variance of the *same-class* members of its 3x3 window. Windows with
// fewer than min_support same-class cells are skipped (their statistics say
// more about the boundary than the region); the support requirement relaxes
// from 4 to 2 when a thin region offers nothing better. A class with no
// usable window at all (isolated speckle) falls back to the population
// variance of its values — speckle from a suppressed region still clusters
// near one level. Only an empty class reports +inf.
double class_flatness(const Image& img, const std::vector<std::uint8_t>& mask,
                      int width, int height) {
  for (int min_support : {4, 2}) {
    double total = 0.0;
    int used = 0;
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) {
        std::size_t i = std::size_t(r) * width + c;
        if (!mask[i]) continue;
        double sum = 0.0, sum2 = 0.0;
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
            std::size_t j = std::size_t(rr) * width + cc;
            if (!mask[j]) continue;
            double v = img.pixels[j];
            sum += v;
            sum2 += v * v;
            ++n;
          }
        if (n < min_support) continue;
        double mean = sum / n;
        total += std::max(0.0, sum2 / n - mean * mean);
        ++used;
      }
    if (used > 0) return total / used;
  }
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) {
      double v = img.pixels[i];
      sum += v;
      sum2 += v * v;
      ++n;
    }
  if (n == 0) return std::numeric_limits<double>::infinity();
  double mean = sum / n;
  return std::max(0.0, sum2 / n - mean * mean);
}

}  // namespace

PatternSharePair encode_pattern_shares(int width, int height, int count,
                                       const BitMatrix& secret,
                                       std::uint64_t base_seed,
                                       std::uint64_t orient_seed) {
  check_bits(secret);
  check_same_dims(width, height, secret.width, secret.height,
                  "encode_pattern_shares");

  PatternSharePair pair;
  pair.seq_a = generate_patterns(width, height, count, base_seed);
  pair.seq_b = pair.seq_a;
  pair.secret = secret;
  pair.base_seed = base_seed;
  pair.orient_seed = orient_seed;

  for (int n = 0; n < count; ++n) {
    BitMatrix& a = pair.seq_a.patterns[n];
    BitMatrix& b = pair.seq_b.patterns[n];
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) {
        if (!secret.at(r, c)) continue;
        // Fresh complementary bits; the base bit is deliberately not reused
        // so a single sequence carries no trace of the secret.
        std::uint8_t bit = std::uint8_t(
            pattern_orientation_bit(orient_seed, std::uint64_t(n), r, c));
        a.at(r, c) = bit;
        b.at(r, c) = std::uint8_t(1 - bit);
      }
  }
  return pair;
}

std::vector<Image> superpose_sequences(const PatternSharePair& pair) {
  check_same_dims(pair.seq_a.width, pair.seq_a.height, pair.seq_b.width,
                  pair.seq_b.height, "superpose_sequences");
  if (pair.seq_a.count() != pair.seq_b.count())
    throw std::invalid_argument("superpose_sequences: sequence length mismatch");

  std::vector<Image> sums;
  sums.reserve(pair.seq_a.count());
  for (int n = 0; n < pair.seq_a.count(); ++n) {
    Image s(pair.seq_a.width, pair.seq_a.height);
    const BitMatrix& a = pair.seq_a.patterns[n];
    const BitMatrix& b = pair.seq_b.patterns[n];
    for (std::size_t i = 0; i < s.pixels.size(); ++i)
      s.pixels[i] = double(a.bits[i]) + double(b.bits[i]);
    sums.push_back(std::move(s));
  }
  return sums;
}

BitMatrix reveal_secret_from_patterns(const PatternSharePair& pair) {
  if (pair.seq_a.count() < 1 || pair.seq_b.count() < 1)
    throw std::invalid_argument("reveal_secret_from_patterns: empty pair");
  check_same_dims(pair.seq_a.width, pair.seq_a.height, pair.seq_b.width,
                  pair.seq_b.height, "reveal_secret_from_patterns");

  // Background sums are 0 or 2 for every n, foreground sums are always 1,
  // so the first pattern pair already separates them exactly.
  const BitMatrix& a = pair.seq_a.patterns[0];
  const BitMatrix& b = pair.seq_b.patterns[0];
  BitMatrix out(a.width, a.height);
  for (std::size_t i = 0; i < out.bits.size(); ++i)
    out.bits[i] = (a.bits[i] + b.bits[i]) == 1;
  return out;
}

BitMatrix reveal_secret_from_reconstruction(const Image& recon_combined,
                                            const Image& recon_single) {
  check_finite(recon_combined, "recon_combined");
  check_finite(recon_single, "recon_single");
  check_same_dims(recon_combined.width, recon_combined.height,
                  recon_single.width, recon_single.height,
                  "reveal_secret_from_reconstruction");

  // Fit recon_combined ≈ a*recon_single + b over all pixels.
  double n = double(recon_single.size());
  double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < recon_single.pixels.size(); ++i) {
    double x = recon_single.pixels[i], y = recon_combined.pixels[i];
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  double a, b;
  if (det > 0.0) {
    a = (n * sxy - sx * sy) / det;
    b = (sy * sxx - sx * sxy) / det;
  } else {
    a = 0.0;  // reference is constant; only the offset is identifiable
    b = sy / n;
  }

  std::vector<double> residual(recon_combined.pixels.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = std::abs(recon_combined.pixels[i] -
                           a * recon_single.pixels[i] - b);
    scale = std::max({scale, std::abs(recon_combined.pixels[i]),
                      std::abs(recon_single.pixels[i])});
  }

  auto [lo_it, hi_it] = std::minmax_element(residual.begin(), residual.end());
  BitMatrix out(recon_combined.width, recon_combined.height);
  // A flat residual means the combined reconstruction is affinely explained
  // by the reference everywhere: nothing is hidden.
  if (*hi_it - *lo_it <= 1e-9 * std::max(1.0, scale)) return out;

  double threshold = otsu_threshold(residual);
  std::vector<std::uint8_t> high(residual.size()), low(residual.size());
  bool any_high = false, any_low = false;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    high[i] = residual[i] > threshold;
    low[i] = !high[i];
    any_high |= bool(high[i]);
    any_low |= bool(low[i]);
  }
  if (!any_high || !any_low) return out;

  // The secret region reconstructs flat (its pattern bits average out of the
  // measurement), so the class that is smoother in the combined
  // reconstruction is the foreground.
  double flat_high = class_flatness(recon_combined, high, out.width, out.height);
  double flat_low = class_flatness(recon_combined, low, out.width, out.height);
  out.bits = flat_high <= flat_low ? high : low;
  return out;
}

BitMatrix reveal_secret_from_reconstruction(const Image& recon_combined) {
  check_finite(recon_combined, "recon_combined");

  // Single-image fallback: without a reference there is no residual to
  // threshold, so split the intensity histogram directly. The hidden region
  // does not modulate the detector (its two share bits always sum to 1), so
  // it reconstructs suppressed — near the DC floor — while the background
  // keeps the doubled object signal: the dimmer class is the foreground.
  // Weaker than the two-image path: it needs the hidden region to be
  // separable from the background by brightness alone.
  BitMatrix out(recon_combined.width, recon_combined.height);
  auto [lo_it, hi_it] =
      std::minmax_element(recon_combined.pixels.begin(), recon_combined.pixels.end());
  double scale = std::max({std::abs(*lo_it), std::abs(*hi_it), 1.0});
  if (*hi_it - *lo_it <= 1e-9 * scale) return out;

  double threshold = otsu_threshold(recon_combined.pixels);
  for (std::size_t i = 0; i < recon_combined.pixels.size(); ++i)
    out.bits[i] = !(recon_combined.pixels[i] > threshold);
  return out;
}

}  // namespace spivc
