#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spivc/raster.hpp"

namespace spivc::qr {

// Byte-mode QR symbols, versions 1-4, all error-correction levels. The
// decoder expects a module-aligned grid (one matrix entry per module);
// there is no camera-style localization.

enum class EcLevel { kL = 0, kM = 1, kQ = 2, kH = 3 };

EcLevel ec_level_from_string(const std::string& s);  // "L","M","Q","H"
std::string to_string(EcLevel level);

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Codeword counts for one (version, level): every block carries
// ec_per_block error-correction codewords; data_lengths lists the data
// codewords of each block. The same numbers ship as data/qr_tables.json.
struct BlockLayout {
  int ec_per_block = 0;
  std::vector<int> data_lengths;

  int data_codewords() const;
  int total_codewords() const;
  int capacity_bytes() const;  // byte-mode payload (mode + 8-bit count header)
};

const BlockLayout& block_layout(int version, EcLevel level);

int side_for_version(int version);  // 17 + 4*version
int version_for_side(int side);     // inverse; throws on non-symbol sides

struct QrSymbol {
  int version = 1;
  EcLevel ec_level = EcLevel::kL;
  int mask_id = 0;
  BitMatrix matrix;  // 1 = light, 0 = dark
};

// mask_id: 0..7 to force a mask, -1 to pick by the penalty rules.
QrSymbol qr_encode(const std::string& message, int version, EcLevel level,
                   int mask_id = -1);

struct Decoded {
  std::string message;
  int corrected_errors = 0;  // codeword errors repaired across all blocks
  int version = 1;
  EcLevel ec_level = EcLevel::kL;
  int mask_id = 0;
};

Decoded qr_decode(const BitMatrix& matrix);

enum class ThresholdPolicy { kOtsu, kMidpoint };

// Thresholds a grayscale module grid (light = above threshold), then
// decodes. Throws on constant images.
Decoded qr_decode_gray(const Image& image,
                       ThresholdPolicy policy = ThresholdPolicy::kOtsu);

// Geometry, exposed so other components can reason about symbol damage.
bool is_function_module(int version, int r, int c);

// Data-region modules in placement order (the zigzag walk); includes the
// remainder positions after the last codeword.
const std::vector<std::pair<int, int>>& data_module_order(int version);

// side*side grid: interleaved codeword index owning each module, or -1 for
// function modules and remainder bits.
std::vector<int> codeword_index_grid(int version, EcLevel level);

// Block owning each interleaved codeword index.
std::vector<int> codeword_block_of(int version, EcLevel level);

// 15-bit format word (BCH-protected, masked) for the level/mask pair.
std::uint16_t format_word(EcLevel level, int mask_id);

}  // namespace spivc::qr
