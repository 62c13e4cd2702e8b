#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spivc/hashing.hpp"
#include "spivc/sample.hpp"
#include "spivc/stats.hpp"

using namespace spivc;

TEST_CASE("otsu separates a well-spread bimodal sample") {
  std::vector<double> values;
  for (int i = 0; i < 300; ++i)
    values.push_back(0.1 + 0.02 * unit_open_double(counter_hash(5, 0, i, 0)));
  for (int i = 0; i < 200; ++i)
    values.push_back(0.8 + 0.02 * unit_open_double(counter_hash(5, 1, i, 0)));

  double thr = otsu_threshold(values);
  CHECK(thr >= 0.1);
  CHECK(thr < 0.8);
  // Classification rule: v > thr is the upper class.
  int upper = 0;
  for (double v : values) upper += v > thr;
  CHECK(upper == 200);
}

TEST_CASE("otsu puts boundary values in the lower class") {
  // Two clusters collapse into exactly two occupied bins; the threshold must
  // land on the lower cluster's bin edge so that (v > thr) excludes it.
  std::vector<double> values(40, 0.0);
  for (int i = 0; i < 10; ++i) values[std::size_t(i)] = 1.0;
  double thr = otsu_threshold(values);
  int upper = 0;
  for (double v : values) upper += v > thr;
  CHECK(upper == 10);
  CHECK(0.0 <= thr);
  CHECK(thr < 1.0);
}

TEST_CASE("otsu tie-break picks the first maximizing split") {
  // Symmetric three-level histogram: splits after the low level and before
  // the high level tie in between-class variance; the first split wins, so
  // only the lowest level stays in the lower class.
  std::vector<double> values;
  values.insert(values.end(), 10, 0.0);
  values.insert(values.end(), 10, 0.5);
  values.insert(values.end(), 10, 1.0);
  double thr = otsu_threshold(values);
  int lower = 0;
  for (double v : values) lower += !(v > thr);
  CHECK(lower == 10);
}

TEST_CASE("otsu degenerate inputs") {
  CHECK_THROWS_AS(otsu_threshold({}), std::invalid_argument);
  CHECK_THROWS_AS(otsu_threshold(std::vector<double>(7, 3.5)),
                  std::invalid_argument);

  // Distinct values can still fall into one occupied interior structure if
  // they span a tiny range; the function must still return something inside
  // the range rather than throw.
  std::vector<double> narrow = {1.0, 1.0 + 1e-13, 1.0 + 2e-13};
  double thr = otsu_threshold(narrow);
  CHECK(thr >= 1.0);
  CHECK(thr <= 1.0 + 2e-13);
}

TEST_CASE("ok glyph dimensions and determinism") {
  BitMatrix g = sample::ok_glyph(33, 33);
  CHECK(g.width == 33);
  CHECK(g.height == 33);
  CHECK(g == sample::ok_glyph(33, 33));

  // Foreground count: the 12x7 master has 30 set cells, scaled by scale².
  int fg = 0;
  for (std::uint8_t b : g.bits) fg += b;
  CHECK(fg == 30);  // 33/17 -> scale 1

  BitMatrix big = sample::ok_glyph(70, 70);  // 70/17 -> scale 4
  int fg_big = 0;
  for (std::uint8_t b : big.bits) fg_big += b;
  CHECK(fg_big == 30 * 4 * 4);
}

TEST_CASE("ok glyph is centered") {
  BitMatrix g = sample::ok_glyph(37, 37, 2);  // 24x14 glyph on 37x37
  int rmin = 37, rmax = -1, cmin = 37, cmax = -1;
  for (int r = 0; r < 37; ++r)
    for (int c = 0; c < 37; ++c)
      if (g.at(r, c)) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
  CHECK(rmax - rmin + 1 == 14);
  CHECK(cmax - cmin + 1 == 24);
  // Centering slack: margins differ by at most one cell.
  CHECK(std::abs(rmin - (36 - rmax)) <= 1);
  CHECK(std::abs(cmin - (36 - cmax)) <= 1);
}

TEST_CASE("ok glyph rejects canvases it cannot fit") {
  CHECK_THROWS_AS(sample::ok_glyph(11, 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample::ok_glyph(24, 13, 2), std::invalid_argument);
  CHECK_THROWS_AS(sample::ok_glyph(8, 8, 0), std::invalid_argument);
  CHECK_NOTHROW(sample::ok_glyph(12, 7, 1));  // exact fit
}

TEST_CASE("scene is deterministic, in range, and 8-bit quantized") {
  Image s = sample::scene(37, 37);
  Image again = sample::scene(37, 37);
  CHECK(s.pixels == again.pixels);

  double lo = 1.0, hi = 0.0;
  for (double v : s.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    double q = v * 255.0;
    CHECK(std::abs(q - std::round(q)) < 1e-9);
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= 1.0);
  CHECK(hi - lo > 0.3);  // real contrast, not near-constant
}

TEST_CASE("scene variants differ materially") {
  Image a = sample::scene(32, 32, 0);
  Image b = sample::scene(32, 32, 1);
  int differing = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    differing += a.pixels[i] != b.pixels[i];
  CHECK(differing > int(a.pixels.size()) / 10);
}

TEST_CASE("scene validates arguments") {
  CHECK_THROWS_AS(sample::scene(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(sample::scene(5, -1), std::invalid_argument);
  CHECK_THROWS_AS(sample::scene(5, 5, -1), std::invalid_argument);
}
