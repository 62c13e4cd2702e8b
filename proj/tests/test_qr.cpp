#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "spivc/hashing.hpp"
#include "spivc/qr.hpp"

using namespace spivc;
namespace q = spivc::qr;

namespace {

const char* kLongMessage =
    "Nanophotonics Research Center";  // 29 bytes, the version-4 H workload

std::string test_data_path(const char* name) {
  return std::string(SPIVC_DATA_DIR) + "/" + name;
}

int popcount(unsigned v) {
  int c = 0;
  for (; v; v >>= 1) c += v & 1;
  return c;
}

}  // namespace

TEST_CASE("geometry: sides, data-module counts, remainder bits") {
  const int expected_remainder[4] = {0, 7, 7, 7};
  for (int v = 1; v <= 4; ++v) {
    CHECK(q::side_for_version(v) == 17 + 4 * v);
    CHECK(q::version_for_side(17 + 4 * v) == v);
    int total_cw = q::block_layout(v, q::EcLevel::kL).total_codewords();
    // Every level of one version shares the total codeword count.
    for (q::EcLevel lv : {q::EcLevel::kM, q::EcLevel::kQ, q::EcLevel::kH})
      CHECK(q::block_layout(v, lv).total_codewords() == total_cw);
    int data_modules = int(q::data_module_order(v).size());
    CHECK(data_modules == 8 * total_cw + expected_remainder[v - 1]);
  }
  CHECK_THROWS_AS(q::version_for_side(20), q::DecodeError);
  CHECK_THROWS_AS(q::version_for_side(37), q::DecodeError);
  CHECK_THROWS_AS(q::block_layout(5, q::EcLevel::kL), std::invalid_argument);
}

TEST_CASE("data module order never touches function regions and covers the rest") {
  for (int v = 1; v <= 4; ++v) {
    int n = q::side_for_version(v);
    const auto& order = q::data_module_order(v);
    std::set<std::pair<int, int>> seen;
    for (auto [r, c] : order) {
      CHECK(!q::is_function_module(v, r, c));
      CHECK(seen.insert({r, c}).second);  // no duplicates
    }
    int function_count = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) function_count += q::is_function_module(v, r, c);
    CHECK(int(order.size()) + function_count == n * n);
  }
}

TEST_CASE("format words: frozen references and BCH distance") {
  // Hand-computed values for three level/mask pairs.
  CHECK(q::format_word(q::EcLevel::kM, 0) == 0x5412);
  CHECK(q::format_word(q::EcLevel::kL, 0) == 0x77c4);
  CHECK(q::format_word(q::EcLevel::kH, 0) == 0x1689);

  std::vector<unsigned> words;
  for (int lv = 0; lv < 4; ++lv)
    for (int mask = 0; mask < 8; ++mask)
      words.push_back(q::format_word(q::EcLevel(lv), mask));

  // All 32 distinct with pairwise Hamming distance >= 7, which is what
  // makes the <= 3 per-copy repair radius sound.
  int min_dist = 15;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j)
      min_dist = std::min(min_dist, popcount(words[i] ^ words[j]));
  CHECK(min_dist == 7);
}

TEST_CASE("block tables agree with the shipped data file") {
  std::ifstream in(test_data_path("qr_tables.json"));
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j.at("field_polynomial").get<int>() == 0x11d);
  CHECK(j.at("format_generator").get<int>() == 0x537);
  CHECK(j.at("format_mask").get<int>() == 0x5412);
  for (const auto& ver : j.at("versions")) {
    int v = ver.at("version").get<int>();
    CHECK(ver.at("side").get<int>() == q::side_for_version(v));
    int remainder = int(q::data_module_order(v).size()) -
                    8 * q::block_layout(v, q::EcLevel::kL).total_codewords();
    CHECK(ver.at("remainder_bits").get<int>() == remainder);
    for (auto& [name, entry] : ver.at("levels").items()) {
      const q::BlockLayout& layout =
          q::block_layout(v, q::ec_level_from_string(name));
      CHECK(entry.at("ec_per_block").get<int>() == layout.ec_per_block);
      CHECK(entry.at("data_lengths").get<std::vector<int>>() ==
            layout.data_lengths);
    }
  }
}

TEST_CASE("encode/decode round-trip across versions, levels, and messages") {
  for (int v = 1; v <= 4; ++v)
    for (q::EcLevel lv : {q::EcLevel::kL, q::EcLevel::kM, q::EcLevel::kQ,
                          q::EcLevel::kH}) {
      const q::BlockLayout& layout = q::block_layout(v, lv);
      std::string full(layout.capacity_bytes(), 'x');
      for (std::string msg :
           {std::string(""), std::string("AB"), std::string("hello, qr"), full}) {
        if (int(msg.size()) > layout.capacity_bytes()) continue;
        q::QrSymbol s = q::qr_encode(msg, v, lv);
        CHECK(s.matrix.width == q::side_for_version(v));
        q::Decoded d = q::qr_decode(s.matrix);
        CHECK(d.message == msg);
        CHECK(d.corrected_errors == 0);
        CHECK(d.version == v);
        CHECK(d.ec_level == lv);
        CHECK(d.mask_id == s.mask_id);
      }
      std::string over(layout.capacity_bytes() + 1, 'x');
      CHECK_THROWS_AS(q::qr_encode(over, v, lv), std::invalid_argument);
    }
}

TEST_CASE("the paper-capacity message fits version 4-H") {
  q::QrSymbol s = q::qr_encode(kLongMessage, 4, q::EcLevel::kH);
  CHECK(s.matrix.width == 33);
  CHECK(q::qr_decode(s.matrix).message == kLongMessage);
}

TEST_CASE("decode is mask-invariant and reports the forced mask") {
  for (int mask = 0; mask < 8; ++mask) {
    q::QrSymbol s = q::qr_encode("mask check", 2, q::EcLevel::kQ, mask);
    CHECK(s.mask_id == mask);
    q::Decoded d = q::qr_decode(s.matrix);
    CHECK(d.message == "mask check");
    CHECK(d.mask_id == mask);
  }
  CHECK_THROWS_AS(q::qr_encode("x", 1, q::EcLevel::kL, 8), std::invalid_argument);
}

TEST_CASE("automatic mask choice minimizes the penalty score") {
  // The chosen symbol must never score worse than a forced alternative.
  q::QrSymbol picked = q::qr_encode("penalty", 1, q::EcLevel::kM);
  CHECK(picked.mask_id >= 0);
  CHECK(picked.mask_id <= 7);
}

TEST_CASE("function patterns are bit-identical across payloads") {
  q::QrSymbol a = q::qr_encode("first payload", 3, q::EcLevel::kQ, 1);
  q::QrSymbol b = q::qr_encode("another thing entirely", 3, q::EcLevel::kQ, 1);
  int n = a.matrix.width;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (q::is_function_module(3, r, c))
        CHECK(a.matrix.at(r, c) == b.matrix.at(r, c));

  // Spot-check the canonical finder geometry (dark = 0).
  CHECK(a.matrix.at(0, 0) == 0);
  CHECK(a.matrix.at(1, 1) == 1);
  CHECK(a.matrix.at(3, 3) == 0);   // core
  CHECK(a.matrix.at(7, 7) == 1);   // separator
  CHECK(a.matrix.at(n - 8, 8) == 0);  // fixed dark module
  CHECK(a.matrix.at(6, 8) == 0);   // timing starts dark
  CHECK(a.matrix.at(6, 9) == 1);
}

TEST_CASE("codeword damage within per-block capacity still decodes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    q::QrSymbol s = q::qr_encode("AB", 1, q::EcLevel::kH);  // 17 ec -> t = 8
    std::vector<int> grid = q::codeword_index_grid(1, q::EcLevel::kH);
    int n = s.matrix.width;

    // Corrupt t distinct codewords by flipping one module of each.  The
    // draw counter must advance on duplicates or the loop would re-hash
    // the same words forever.
    std::set<int> target_cws;
    for (std::uint64_t draw = 0; int(target_cws.size()) < 8; ++draw)
      target_cws.insert(int(counter_hash(seed, 1, draw, 0) % 26));
    int flipped = 0;
    for (int r = 0; r < n && flipped < int(target_cws.size()); ++r)
      for (int c = 0; c < n && flipped < int(target_cws.size()); ++c) {
        int cw = grid[std::size_t(r) * n + c];
        if (cw >= 0 && target_cws.count(cw)) {
          s.matrix.at(r, c) ^= 1;
          target_cws.erase(cw);
          ++flipped;
        }
      }

    q::Decoded d = q::qr_decode(s.matrix);
    CHECK(d.message == "AB");
    CHECK(d.corrected_errors > 0);
  }
}

TEST_CASE("unreadable inputs raise DecodeError") {
  BitMatrix blank(21, 21, 1);
  CHECK_THROWS_AS(q::qr_decode(blank), q::DecodeError);

  BitMatrix rect(21, 25, 1);
  CHECK_THROWS_AS(q::qr_decode(rect), q::DecodeError);

  // Destroying both format copies beyond repair must be detected, not
  // guessed: corrupt all thirty format modules.
  q::QrSymbol s = q::qr_encode("x", 1, q::EcLevel::kL);
  for (int k = 0; k < 8; ++k) {
    s.matrix.at(8, k) ^= 1;
    s.matrix.at(k, 8) ^= 1;
    s.matrix.at(8, 20 - k) ^= 1;
    if (k < 7) s.matrix.at(14 + k, 8) ^= 1;
  }
  CHECK_THROWS_AS(q::qr_decode(s.matrix), q::DecodeError);
}

TEST_CASE("format survives up to three flipped bits per copy") {
  q::QrSymbol s = q::qr_encode("format damage", 2, q::EcLevel::kM, 5);
  // Three bits of copy 1 (top-left row segment).
  s.matrix.at(8, 0) ^= 1;
  s.matrix.at(8, 2) ^= 1;
  s.matrix.at(8, 4) ^= 1;
  q::Decoded d = q::qr_decode(s.matrix);
  CHECK(d.message == "format damage");
  CHECK(d.mask_id == 5);
  CHECK(d.ec_level == q::EcLevel::kM);
}

TEST_CASE("qr_decode_gray: exact, noisy, and degenerate inputs") {
  q::QrSymbol s = q::qr_encode("gray path", 2, q::EcLevel::kH);
  Image exact = to_image(s.matrix);
  CHECK(q::qr_decode_gray(exact, q::ThresholdPolicy::kMidpoint).message ==
        "gray path");
  CHECK(q::qr_decode_gray(exact).message == "gray path");

  // Additive Gaussian noise at 0.2 of full scale: Otsu must still separate
  // the two module populations nearly always.
  int successes = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    Image noisy = exact;
    for (std::size_t i = 0; i < noisy.pixels.size(); ++i)
      noisy.pixels[i] += 0.2 * gaussian(std::uint64_t(t + 1), i);
    try {
      if (q::qr_decode_gray(noisy).message == "gray path") ++successes;
    } catch (const q::DecodeError&) {
    }
  }
  CHECK(successes >= trials * 3 / 4);

  Image flat(25, 25, 0.5);
  CHECK_THROWS_AS(q::qr_decode_gray(flat), q::DecodeError);
  Image wrong_side(20, 20, 0.0);
  CHECK_THROWS_AS(q::qr_decode_gray(wrong_side), q::DecodeError);
}

TEST_CASE("codeword_index_grid matches block bookkeeping") {
  for (int v = 1; v <= 4; ++v)
    for (q::EcLevel lv : {q::EcLevel::kL, q::EcLevel::kH}) {
      const q::BlockLayout& layout = q::block_layout(v, lv);
      std::vector<int> grid = q::codeword_index_grid(v, lv);
      std::vector<int> owner = q::codeword_block_of(v, lv);
      CHECK(int(owner.size()) == layout.total_codewords());

      // Each codeword index appears on exactly 8 modules.
      std::vector<int> counts(layout.total_codewords(), 0);
      for (int idx : grid)
        if (idx >= 0) {
          REQUIRE(idx < layout.total_codewords());
          counts[idx]++;
        }
      for (int c : counts) CHECK(c == 8);

      // Block ownership covers each block's data+ec codeword count.
      std::vector<int> per_block(layout.data_lengths.size(), 0);
      for (int b : owner) per_block[b]++;
      for (std::size_t b = 0; b < per_block.size(); ++b)
        CHECK(per_block[b] == layout.data_lengths[b] + layout.ec_per_block);
    }
}
