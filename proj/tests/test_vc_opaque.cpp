#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "spivc/hashing.hpp"
#include "spivc/measure.hpp"
#include "spivc/qr.hpp"
#include "spivc/sample.hpp"
#include "spivc/vc_opaque.hpp"

using namespace spivc;

namespace {

BitMatrix random_bits(int w, int h, std::uint64_t seed) {
  BitMatrix m(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      m.at(r, c) = std::uint8_t(counter_hash(seed, 4000, cell_key(r, c), 0) & 1);
  return m;
}

}  // namespace

TEST_CASE("share pair invariants hold for both assignments") {
  for (ShareAssignment mode : {ShareAssignment::kRandom, ShareAssignment::kBalanced})
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      BitMatrix base = random_bits(17, 11, seed);
      BitMatrix secret = random_bits(17, 11, seed + 50);
      SharePair pair = encode_shares(base, secret, seed, mode);
      for (int r = 0; r < 11; ++r)
        for (int c = 0; c < 17; ++c) {
          if (secret.at(r, c)) {
            // Exactly one light and one dark, and exactly one key modified.
            CHECK(int(pair.key1.at(r, c)) + int(pair.key2.at(r, c)) == 1);
            CHECK((pair.key1.at(r, c) != base.at(r, c)) !=
                  (pair.key2.at(r, c) != base.at(r, c)));
          } else {
            CHECK(pair.key1.at(r, c) == base.at(r, c));
            CHECK(pair.key2.at(r, c) == base.at(r, c));
          }
        }
    }
}

TEST_CASE("all-zero and all-one secrets degenerate correctly") {
  BitMatrix base = random_bits(9, 9, 3);
  BitMatrix zeros(9, 9, 0);
  SharePair plain = encode_shares(base, zeros, 7);
  CHECK(plain.key1 == base);
  CHECK(plain.key2 == base);

  BitMatrix ones(9, 9, 1);
  SharePair full = encode_shares(base, ones, 7);
  Image ov = overlay(full.key1, full.key2);
  for (double v : ov.pixels) CHECK(v == 1.0);
}

TEST_CASE("encode_shares is deterministic in the seed") {
  BitMatrix base = random_bits(13, 13, 1);
  BitMatrix secret = random_bits(13, 13, 2);
  SharePair a = encode_shares(base, secret, 42);
  SharePair b = encode_shares(base, secret, 42);
  SharePair c = encode_shares(base, secret, 43);
  CHECK(a.key1 == b.key1);
  CHECK(a.key2 == b.key2);
  CHECK(a.key1 != c.key1);  // overwhelmingly likely with 13x13 secrets
}

TEST_CASE("overlay implements the opaque-stack intensity table") {
  BitMatrix k1(2, 2), k2(2, 2);
  // All four bit combinations at once: (0,0) (0,1) (1,0) (1,1).
  k1.bits = {0, 0, 1, 1};
  k2.bits = {0, 1, 0, 1};
  Image ov = overlay(k1, k2);
  CHECK(ov.pixels[0] == 0.0);
  CHECK(ov.pixels[1] == 1.0);
  CHECK(ov.pixels[2] == 1.0);
  CHECK(ov.pixels[3] == 2.0);

  BitMatrix same = random_bits(5, 5, 9);
  Image doubled = overlay(same, same);
  for (std::size_t i = 0; i < doubled.pixels.size(); ++i) {
    CHECK(doubled.pixels[i] == 2.0 * same.bits[i]);
    CHECK(doubled.pixels[i] != 1.0);
  }
}

TEST_CASE("overlay value 1 appears exactly on the secret support") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BitMatrix base = random_bits(33, 33, seed);
    BitMatrix secret = random_bits(33, 33, seed + 100);
    SharePair pair = encode_shares(base, secret, seed);
    Image ov = overlay(pair.key1, pair.key2);
    BitMatrix recovered = extract_secret_from_overlay(ov);
    CHECK(recovered == secret);
  }
}

TEST_CASE("detector sum equals overlay measurement") {
  BitMatrix base = random_bits(12, 12, 5);
  BitMatrix secret = random_bits(12, 12, 6);
  SharePair pair = encode_shares(base, secret, 11);
  PatternSequence p = generate_patterns(12, 12, 40, 77);

  MeasurementSeries combined =
      measure_combined({to_image(pair.key1), to_image(pair.key2)}, {p, p});
  MeasurementSeries direct = measure(overlay(pair.key1, pair.key2), p);
  CHECK(combined.values == direct.values);  // sums of small integers: exact
}

TEST_CASE("extract_secret_from_overlay rejects out-of-range values") {
  Image ov(2, 1);
  ov.pixels = {1.0, 2.3};
  CHECK_THROWS_AS(extract_secret_from_overlay(ov), std::invalid_argument);
  ov.pixels = {1.0, 2.2};
  BitMatrix ok = extract_secret_from_overlay(ov);
  CHECK(ok.bits[0] == 1);
  CHECK(ok.bits[1] == 0);

  Image neg(1, 1);
  neg.pixels = {-0.3};
  CHECK_THROWS_AS(extract_secret_from_overlay(neg), std::invalid_argument);
}

TEST_CASE("random assignment is a fair coin, independent of the base bit") {
  // >= 256 foreground dots per the security property; use a full-one secret
  // over a mixed base so both conditionals are populated.
  BitMatrix base = random_bits(32, 32, 8);
  BitMatrix secret(32, 32, 1);
  SharePair pair = encode_shares(base, secret, 1234, ShareAssignment::kRandom);

  int ones = 0, ones_base1 = 0, n_base1 = 0, ones_base0 = 0, n_base0 = 0;
  for (std::size_t i = 0; i < base.bits.size(); ++i) {
    ones += pair.key1.bits[i];
    if (base.bits[i]) {
      ones_base1 += pair.key1.bits[i];
      ++n_base1;
    } else {
      ones_base0 += pair.key1.bits[i];
      ++n_base0;
    }
  }
  double p = double(ones) / double(base.bits.size());
  CHECK(p >= 0.4);
  CHECK(p <= 0.6);
  double p1 = double(ones_base1) / double(n_base1);
  double p0 = double(ones_base0) / double(n_base0);
  CHECK(std::abs(p1 - p0) <= 0.15);
}

TEST_CASE("balanced assignment splits modifications to within one") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    BitMatrix base = random_bits(19, 17, seed);
    BitMatrix secret = random_bits(19, 17, seed + 31);
    SharePair pair = encode_shares(base, secret, seed, ShareAssignment::kBalanced);
    int mod1 = 0, mod2 = 0;
    for (std::size_t i = 0; i < base.bits.size(); ++i) {
      if (!secret.bits[i]) continue;
      mod1 += pair.key1.bits[i] != pair.base.bits[i];
      mod2 += pair.key2.bits[i] != pair.base.bits[i];
    }
    CHECK(std::abs(mod1 - mod2) <= 1);
  }
}

TEST_CASE("rescale_overlay undoes an affine distortion") {
  BitMatrix base = random_bits(21, 21, 2);
  BitMatrix secret = random_bits(21, 21, 3);
  SharePair pair = encode_shares(base, secret, 5);
  Image ov = overlay(pair.key1, pair.key2);

  Image distorted = ov;
  for (double& v : distorted.pixels) v = 0.37 * v + 4.2;
  Image back = rescale_overlay(distorted);
  for (std::size_t i = 0; i < ov.pixels.size(); ++i)
    CHECK(back.pixels[i] == doctest::Approx(ov.pixels[i]).epsilon(1e-9));
  CHECK(extract_secret_from_overlay(back) == secret);

  Image flat(4, 4, 1.0);
  CHECK_THROWS_AS(rescale_overlay(flat), std::invalid_argument);
}

TEST_CASE("modification_budget counts codeword damage") {
  qr::QrSymbol symbol = qr::qr_encode("Nanophotonics Research Center", 4,
                                      qr::EcLevel::kH);

  BitMatrix empty(33, 33, 0);
  ModificationBudget none = modification_budget(empty, symbol);
  CHECK(none.per_key_expected == 0.0);
  CHECK(none.per_block_worst == 0);
  CHECK(none.ok);

  // Cover the whole symbol: every codeword of every block is hit, far
  // beyond the capacity of 8 per block.
  BitMatrix all(33, 33, 1);
  ModificationBudget broken = modification_budget(all, symbol);
  CHECK(broken.per_block_worst == 25);  // 9 data + 16 ec codewords per block
  CHECK(!broken.ok);

  // The stock glyph must fit the version 4-H budget.
  BitMatrix glyph = sample::ok_glyph(33, 33);
  ModificationBudget budget = modification_budget(glyph, symbol);
  CHECK(budget.ok);
  CHECK(budget.per_key_expected > 0.0);
}
