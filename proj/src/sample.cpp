#include "spivc/sample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string_view>

#include "spivc/hashing.hpp"

namespace spivc::sample {

namespace {

constexpr int kGlyphWidth = 12;
constexpr int kGlyphHeight = 7;
constexpr std::array<std::string_view, kGlyphHeight> kGlyph = {
    ".###...#...#",
    "#...#..#..#.",
    "#...#..#.#..",
    "#...#..##...",
    "#...#..#.#..",
    "#...#..#..#.",
    ".###...#...#",
};

}  // namespace

BitMatrix ok_glyph(int width, int height, int scale) {
  check_dims(width, height);
  if (scale == 0) scale = std::max(1, std::min(width, height) / 17);
  if (scale < 1) throw std::invalid_argument("ok_glyph: scale must be >= 1");
  int gw = kGlyphWidth * scale, gh = kGlyphHeight * scale;
  if (gw > width || gh > height)
    throw std::invalid_argument("ok_glyph: glyph does not fit the canvas");

  BitMatrix out(width, height);
  int top = (height - gh) / 2, left = (width - gw) / 2;
  for (int r = 0; r < gh; ++r)
    for (int c = 0; c < gw; ++c)
      if (kGlyph[r / scale][c / scale] == '#')
        out.at(top + r, left + c) = 1;
  return out;
}

Image scene(int width, int height, int variant) {
  check_dims(width, height);
  if (variant < 0) throw std::invalid_argument("scene: variant must be >= 0");

  // Blob layout jittered by the variant so different variants are genuinely
  // different objects, not a translate of one another.
  std::uint64_t seed = std::uint64_t(variant);
  auto jitter = [&](int k) {
    return unit_open_double(counter_hash(seed, kDomainShuffle, 100 + k, 0));
  };

  struct Blob {
    double cx, cy, rx, ry, amp;
  };
  std::array<Blob, 4> blobs = {{
      {0.50 + 0.10 * (jitter(0) - 0.5), 0.48 + 0.10 * (jitter(1) - 0.5),
       0.30 + 0.06 * jitter(2), 0.34 + 0.06 * jitter(3), 0.75},
      {0.22 + 0.08 * jitter(4), 0.70 + 0.08 * jitter(5), 0.12, 0.10, 0.45},
      {0.78 - 0.08 * jitter(6), 0.24 + 0.08 * jitter(7), 0.10, 0.12, 0.40},
      {0.30 + 0.10 * jitter(8), 0.20 + 0.08 * jitter(9), 0.08, 0.08, 0.30},
  }};

  Image img(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double x = (c + 0.5) / width, y = (r + 0.5) / height;
      // Gentle diagonal ramp keeps the background from being constant.
      double v = 0.08 + 0.10 * (x + y) / 2.0;
      for (const Blob& b : blobs) {
        double dx = (x - b.cx) / b.rx, dy = (y - b.cy) / b.ry;
        double d2 = dx * dx + dy * dy;
        // Flat-topped profile: solid body with a smooth shoulder, so the
        // object is piecewise smooth rather than a field of peaks.
        double profile = d2 <= 1.0 ? 1.0 : std::exp(-3.0 * (d2 - 1.0));
        v += b.amp * profile;
      }
      img.at(r, c) = std::clamp(v, 0.0, 1.0);
    }

  // 8-bit quantization, then back to [0, 1].
  for (double& v : img.pixels) v = std::round(v * 255.0) / 255.0;
  return img;
}

}  // namespace spivc::sample
