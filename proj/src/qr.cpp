#include "spivc/qr.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "spivc/reed_solomon.hpp"
#include "spivc/stats.hpp"

namespace spivc::qr {

namespace {

constexpr int kMinVersion = 1;
constexpr int kMaxVersion = 4;

void check_version(int version) {
  if (version < kMinVersion || version > kMaxVersion)
    throw std::invalid_argument("qr: version must be 1..4");
}

void check_mask(int mask_id) {
  if (mask_id < 0 || mask_id > 7)
    throw std::invalid_argument("qr: mask id must be 0..7");
}

// Block structure per version and level; mirrored by data/qr_tables.json.
const BlockLayout kLayouts[kMaxVersion][4] = {
    // L              M               Q               H
    {{7, {19}},       {10, {16}},     {13, {13}},     {17, {9}}},
    {{10, {34}},      {16, {28}},     {22, {22}},     {28, {16}}},
    {{15, {55}},      {26, {44}},     {18, {17, 17}}, {22, {13, 13}}},
    {{20, {80}},      {18, {32, 32}}, {26, {24, 24}}, {16, {9, 9, 9, 9}}},
};

// Mask conditions: a true cell is flipped. Row r, column c.
bool mask_bit(int mask_id, int r, int c) {
  switch (mask_id) {
    case 0: return (r + c) % 2 == 0;
    case 1: return r % 2 == 0;
    case 2: return c % 3 == 0;
    case 3: return (r + c) % 3 == 0;
    case 4: return (r / 2 + c / 3) % 2 == 0;
    case 5: return (r * c) % 2 + (r * c) % 3 == 0;
    case 6: return ((r * c) % 2 + (r * c) % 3) % 2 == 0;
    case 7: return ((r + c) % 2 + (r * c) % 3) % 2 == 0;
    default: std::abort();
  }
}

int level_code(EcLevel level) {
  switch (level) {
    case EcLevel::kL: return 1;
    case EcLevel::kM: return 0;
    case EcLevel::kQ: return 3;
    case EcLevel::kH: return 2;
  }
  std::abort();
}

// The 15 module positions of each format-information copy, indexed by bit
// (0 = least significant). Copy 1 wraps the top-left finder; copy 2 splits
// between the top-right and bottom-left ones.
std::pair<int, int> format_pos_copy1(int bit) {
  if (bit <= 5) return {bit, 8};
  if (bit == 6) return {7, 8};
  if (bit == 7) return {8, 8};
  if (bit == 8) return {8, 7};
  return {8, 14 - bit};
}

std::pair<int, int> format_pos_copy2(int bit, int side) {
  if (bit <= 7) return {8, side - 1 - bit};
  return {side - 15 + bit, 8};
}

// dark = true paints a 0 (bit 1 is light throughout the library).
void paint(BitMatrix& m, int r, int c, bool dark) {
  m.at(r, c) = dark ? 0 : 1;
}

bool is_dark(const BitMatrix& m, int r, int c) { return m.at(r, c) == 0; }

void draw_finder(BitMatrix& m, int top, int left) {
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) {
      bool ring = r == 0 || r == 6 || c == 0 || c == 6;
      bool core = r >= 2 && r <= 4 && c >= 2 && c <= 4;
      paint(m, top + r, left + c, ring || core);
    }
}

void draw_function_patterns(BitMatrix& m, int version) {
  int n = m.width;
  // Everything starts light; separators and reserved areas stay that way.
  std::fill(m.bits.begin(), m.bits.end(), std::uint8_t(1));
  draw_finder(m, 0, 0);
  draw_finder(m, 0, n - 7);
  draw_finder(m, n - 7, 0);
  for (int k = 8; k <= n - 9; ++k) {
    paint(m, 6, k, k % 2 == 0);  // horizontal timing
    paint(m, k, 6, k % 2 == 0);  // vertical timing
  }
  if (version >= 2) {
    int center = n - 7;
    for (int dr = -2; dr <= 2; ++dr)
      for (int dc = -2; dc <= 2; ++dc) {
        bool dark = std::max(std::abs(dr), std::abs(dc)) != 1;
        paint(m, center + dr, center + dc, dark);
      }
  }
  paint(m, n - 8, 8, true);  // fixed dark module
}

void place_format(BitMatrix& m, EcLevel level, int mask_id) {
  std::uint16_t word = format_word(level, mask_id);
  int n = m.width;
  for (int bit = 0; bit < 15; ++bit) {
    bool dark = (word >> bit) & 1;
    auto [r1, c1] = format_pos_copy1(bit);
    auto [r2, c2] = format_pos_copy2(bit, n);
    paint(m, r1, c1, dark);
    paint(m, r2, c2, dark);
  }
}

// Appends `count` low bits of `value`, most significant of the group first.
void append_bits(std::vector<std::uint8_t>& bits, unsigned value, int count) {
  for (int i = count - 1; i >= 0; --i)
    bits.push_back(std::uint8_t((value >> i) & 1u));
}

// Message -> padded data codewords (byte-mode segment + terminator + pads).
std::vector<std::uint8_t> build_data_codewords(const std::string& message,
                                               const BlockLayout& layout) {
  int capacity = layout.capacity_bytes();
  if (int(message.size()) > capacity)
    throw std::invalid_argument(
        "qr: message of " + std::to_string(message.size()) +
        " bytes exceeds capacity " + std::to_string(capacity));

  std::vector<std::uint8_t> bits;
  append_bits(bits, 0b0100, 4);  // byte mode
  append_bits(bits, unsigned(message.size()), 8);
  for (unsigned char ch : message) append_bits(bits, ch, 8);

  std::size_t limit = std::size_t(layout.data_codewords()) * 8;
  for (int i = 0; i < 4 && bits.size() < limit; ++i) bits.push_back(0);
  while (bits.size() % 8 != 0) bits.push_back(0);

  std::vector<std::uint8_t> words;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned w = 0;
    for (int j = 0; j < 8; ++j) w = (w << 1) | bits[i + j];
    words.push_back(std::uint8_t(w));
  }
  for (std::uint8_t pad = 0xec; words.size() < std::size_t(layout.data_codewords());)
    words.push_back(std::exchange(pad, std::uint8_t(pad == 0xec ? 0x11 : 0xec)));
  return words;
}

// Split sequential data codewords into blocks, attach EC, and emit the
// interleaved transmission order (all first data codewords, all second, ...,
// then the EC codewords likewise).
std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& data,
                                     const BlockLayout& layout) {
  std::vector<std::vector<std::uint8_t>> blocks, ecs;
  std::size_t pos = 0;
  for (int len : layout.data_lengths) {
    blocks.emplace_back(data.begin() + pos, data.begin() + pos + len);
    ecs.push_back(rs::ec_codewords(blocks.back(), layout.ec_per_block));
    pos += len;
  }
  std::vector<std::uint8_t> out;
  out.reserve(layout.total_codewords());
  int max_len = *std::max_element(layout.data_lengths.begin(),
                                  layout.data_lengths.end());
  for (int i = 0; i < max_len; ++i)
    for (const auto& b : blocks)
      if (i < int(b.size())) out.push_back(b[i]);
  for (int i = 0; i < layout.ec_per_block; ++i)
    for (const auto& e : ecs) out.push_back(e[i]);
  return out;
}

// Penalty rules scored on the finished symbol; lower is better.
int penalty_score(const BitMatrix& m) {
  int n = m.width;
  int score = 0;

  // Rule 1: runs of one color, length >= 5, in rows and columns.
  for (int axis = 0; axis < 2; ++axis)
    for (int i = 0; i < n; ++i) {
      int run = 0;
      bool color = false;
      for (int j = 0; j < n; ++j) {
        bool d = axis == 0 ? is_dark(m, i, j) : is_dark(m, j, i);
        if (j == 0 || d != color) {
          color = d;
          run = 1;
        } else if (++run == 5) {
          score += 3;
        } else if (run > 5) {
          score += 1;
        }
      }
    }

  // Rule 2: 2x2 blocks of one color.
  for (int r = 0; r + 1 < n; ++r)
    for (int c = 0; c + 1 < n; ++c) {
      bool d = is_dark(m, r, c);
      if (is_dark(m, r, c + 1) == d && is_dark(m, r + 1, c) == d &&
          is_dark(m, r + 1, c + 1) == d)
        score += 3;
    }

  // Rule 3: finder-like run 1011101 with 4 light modules on either side.
  constexpr std::array<int, 11> kLead = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1};
  constexpr std::array<int, 11> kTail = {1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0};
  for (int axis = 0; axis < 2; ++axis)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 11 <= n; ++j) {
        bool lead = true, tail = true;
        for (int k = 0; k < 11; ++k) {
          bool d = axis == 0 ? is_dark(m, i, j + k) : is_dark(m, j + k, i);
          if (d != (kLead[k] == 1)) lead = false;
          if (d != (kTail[k] == 1)) tail = false;
        }
        if (lead) score += 40;
        if (tail) score += 40;
      }

  // Rule 4: deviation of the dark-module share from 50%, in 5% steps.
  int dark = 0;
  for (std::uint8_t b : m.bits) dark += b == 0;
  double percent = 100.0 * dark / double(m.bits.size());
  score += 10 * int(std::abs(percent - 50.0) / 5.0);
  return score;
}

void apply_mask(BitMatrix& m, int version, int mask_id) {
  for (auto [r, c] : data_module_order(version))
    if (mask_bit(mask_id, r, c)) m.at(r, c) ^= 1;
}

struct BitReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;  // bit cursor

  std::size_t remaining() const { return bytes.size() * 8 - pos; }
  unsigned read(int count) {
    unsigned v = 0;
    for (int i = 0; i < count; ++i, ++pos)
      v = (v << 1) | ((bytes[pos / 8] >> (7 - pos % 8)) & 1u);
    return v;
  }
};

std::string parse_byte_segments(const std::vector<std::uint8_t>& data) {
  BitReader reader{data};
  std::string message;
  while (reader.remaining() >= 4) {
    unsigned mode = reader.read(4);
    if (mode == 0) break;  // terminator
    if (mode != 0b0100)
      throw DecodeError("qr: unsupported segment mode " + std::to_string(mode));
    if (reader.remaining() < 8)
      throw DecodeError("qr: truncated segment header");
    unsigned len = reader.read(8);
    if (reader.remaining() < std::size_t(len) * 8)
      throw DecodeError("qr: segment length exceeds available data");
    for (unsigned i = 0; i < len; ++i)
      message.push_back(char(reader.read(8)));
  }
  return message;
}

int popcount15(unsigned v) {
  int c = 0;
  for (; v; v >>= 1) c += v & 1;
  return c;
}

// Identify (level, mask) from the two redundant format copies: the valid
// word nearest in total Hamming distance wins, provided at least one copy
// is within the BCH correction radius of 3. Candidate order fixes ties.
std::pair<EcLevel, int> read_format(const BitMatrix& m) {
  int n = m.width;
  unsigned copy1 = 0, copy2 = 0;
  for (int bit = 0; bit < 15; ++bit) {
    auto [r1, c1] = format_pos_copy1(bit);
    auto [r2, c2] = format_pos_copy2(bit, n);
    copy1 |= unsigned(is_dark(m, r1, c1)) << bit;
    copy2 |= unsigned(is_dark(m, r2, c2)) << bit;
  }
  int best_total = 99;
  std::pair<EcLevel, int> best{EcLevel::kL, 0};
  for (int lv = 0; lv < 4; ++lv)
    for (int mask = 0; mask < 8; ++mask) {
      unsigned want = format_word(EcLevel(lv), mask);
      int d1 = popcount15(copy1 ^ want);
      int d2 = popcount15(copy2 ^ want);
      if (std::min(d1, d2) > 3) continue;
      if (d1 + d2 < best_total) {
        best_total = d1 + d2;
        best = {EcLevel(lv), mask};
      }
    }
  if (best_total == 99)
    throw DecodeError("qr: format information unreadable");
  return best;
}

}  // namespace

EcLevel ec_level_from_string(const std::string& s) {
  if (s == "L" || s == "l") return EcLevel::kL;
  if (s == "M" || s == "m") return EcLevel::kM;
  if (s == "Q" || s == "q") return EcLevel::kQ;
  if (s == "H" || s == "h") return EcLevel::kH;
  throw std::invalid_argument("qr: unknown EC level '" + s + "'");
}

std::string to_string(EcLevel level) {
  switch (level) {
    case EcLevel::kL: return "L";
    case EcLevel::kM: return "M";
    case EcLevel::kQ: return "Q";
    case EcLevel::kH: return "H";
  }
  std::abort();
}

int BlockLayout::data_codewords() const {
  int sum = 0;
  for (int len : data_lengths) sum += len;
  return sum;
}

int BlockLayout::total_codewords() const {
  return data_codewords() + ec_per_block * int(data_lengths.size());
}

int BlockLayout::capacity_bytes() const {
  // 4-bit mode + 8-bit count leaves data_codewords - 2 whole bytes (the
  // 4-bit terminator fits in the slack).
  return data_codewords() - 2;
}

const BlockLayout& block_layout(int version, EcLevel level) {
  check_version(version);
  return kLayouts[version - 1][int(level)];
}

int side_for_version(int version) {
  check_version(version);
  return 17 + 4 * version;
}

int version_for_side(int side) {
  if (side >= 21 && side <= 33 && (side - 17) % 4 == 0) return (side - 17) / 4;
  throw DecodeError("qr: " + std::to_string(side) +
                    " is not a version 1..4 symbol side");
}

bool is_function_module(int version, int r, int c) {
  int n = side_for_version(version);
  if (r == 6 || c == 6) return true;                 // timing
  if (r <= 8 && c <= 8) return true;                 // finder + format
  if (r <= 8 && c >= n - 8) return true;
  if (r >= n - 8 && c <= 8) return true;
  if (version >= 2) {                                // alignment, center n-7
    int center = n - 7;
    if (std::abs(r - center) <= 2 && std::abs(c - center) <= 2) return true;
  }
  return false;
}

const std::vector<std::pair<int, int>>& data_module_order(int version) {
  check_version(version);
  static std::vector<std::pair<int, int>> cache[kMaxVersion];
  auto& order = cache[version - 1];
  if (!order.empty()) return order;

  int n = side_for_version(version);
  // Two-module columns, right to left, snaking up then down; the vertical
  // timing column is skipped entirely.
  bool upward = true;
  for (int c = n - 1; c > 0; c -= 2) {
    if (c == 6) c = 5;
    for (int i = 0; i < n; ++i) {
      int r = upward ? n - 1 - i : i;
      for (int dc = 0; dc < 2; ++dc)
        if (!is_function_module(version, r, c - dc))
          order.emplace_back(r, c - dc);
    }
    upward = !upward;
  }
  return order;
}

std::vector<int> codeword_index_grid(int version, EcLevel level) {
  int n = side_for_version(version);
  int total = block_layout(version, level).total_codewords();
  std::vector<int> grid(std::size_t(n) * n, -1);
  const auto& order = data_module_order(version);
  for (std::size_t k = 0; k < order.size(); ++k) {
    int cw = int(k / 8);
    if (cw >= total) break;  // remainder bits stay -1
    grid[std::size_t(order[k].first) * n + order[k].second] = cw;
  }
  return grid;
}

std::vector<int> codeword_block_of(int version, EcLevel level) {
  const BlockLayout& layout = block_layout(version, level);
  int num_blocks = int(layout.data_lengths.size());
  std::vector<int> owner;
  owner.reserve(layout.total_codewords());
  int max_len = *std::max_element(layout.data_lengths.begin(),
                                  layout.data_lengths.end());
  for (int i = 0; i < max_len; ++i)
    for (int b = 0; b < num_blocks; ++b)
      if (i < layout.data_lengths[b]) owner.push_back(b);
  for (int i = 0; i < layout.ec_per_block; ++i)
    for (int b = 0; b < num_blocks; ++b) owner.push_back(b);
  return owner;
}

std::uint16_t format_word(EcLevel level, int mask_id) {
  check_mask(mask_id);
  unsigned data = unsigned(level_code(level)) << 3 | unsigned(mask_id);
  unsigned rem = data << 10;
  for (int bit = 14; bit >= 10; --bit)
    if ((rem >> bit) & 1u) rem ^= 0x537u << (bit - 10);
  return std::uint16_t(((data << 10) | rem) ^ 0x5412u);
}

QrSymbol qr_encode(const std::string& message, int version, EcLevel level,
                   int mask_id) {
  check_version(version);
  if (mask_id != -1) check_mask(mask_id);
  const BlockLayout& layout = block_layout(version, level);

  std::vector<std::uint8_t> codewords =
      interleave(build_data_codewords(message, layout), layout);

  int n = side_for_version(version);
  BitMatrix base(n, n);
  draw_function_patterns(base, version);
  const auto& order = data_module_order(version);
  for (std::size_t k = 0; k < order.size(); ++k) {
    bool dark = k < codewords.size() * 8 &&
                ((codewords[k / 8] >> (7 - k % 8)) & 1);
    paint(base, order[k].first, order[k].second, dark);
  }

  auto finish = [&](int mask) {
    QrSymbol s{version, level, mask, base};
    apply_mask(s.matrix, version, mask);
    place_format(s.matrix, level, mask);
    return s;
  };

  if (mask_id != -1) return finish(mask_id);
  QrSymbol best;
  int best_score = -1;
  for (int mask = 0; mask < 8; ++mask) {
    QrSymbol s = finish(mask);
    int score = penalty_score(s.matrix);
    if (best_score < 0 || score < best_score) {
      best_score = score;
      best = std::move(s);
    }
  }
  return best;
}

Decoded qr_decode(const BitMatrix& matrix) {
  check_bits(matrix);
  if (matrix.width != matrix.height)
    throw DecodeError("qr: matrix is not square");
  int version = version_for_side(matrix.width);
  auto [level, mask_id] = read_format(matrix);
  const BlockLayout& layout = block_layout(version, level);

  BitMatrix work = matrix;
  apply_mask(work, version, mask_id);

  const auto& order = data_module_order(version);
  std::vector<std::uint8_t> codewords(layout.total_codewords(), 0);
  for (std::size_t k = 0; k < codewords.size() * 8; ++k)
    if (is_dark(work, order[k].first, order[k].second))
      codewords[k / 8] |= std::uint8_t(0x80u >> (k % 8));

  // Undo the interleaving, then repair each block independently.
  std::vector<int> owner = codeword_block_of(version, level);
  int num_blocks = int(layout.data_lengths.size());
  std::vector<std::vector<std::uint8_t>> blocks(num_blocks);
  for (std::size_t i = 0; i < codewords.size(); ++i)
    blocks[owner[i]].push_back(codewords[i]);

  int corrected = 0;
  std::vector<std::uint8_t> all_data;
  for (int b = 0; b < num_blocks; ++b) {
    rs::Corrected fixed;
    try {
      fixed = rs::correct(blocks[b], layout.ec_per_block);
    } catch (const rs::DecodeError& e) {
      throw DecodeError("qr: block " + std::to_string(b) + ": " + e.what());
    }
    corrected += fixed.corrected;
    all_data.insert(all_data.end(), fixed.codeword.begin(),
                    fixed.codeword.begin() + layout.data_lengths[b]);
  }

  Decoded result;
  result.message = parse_byte_segments(all_data);
  result.corrected_errors = corrected;
  result.version = version;
  result.ec_level = level;
  result.mask_id = mask_id;
  return result;
}

Decoded qr_decode_gray(const Image& image, ThresholdPolicy policy) {
  check_finite(image);
  if (image.width != image.height)
    throw DecodeError("qr: image is not square");
  version_for_side(image.width);  // validates the side early

  auto [lo_it, hi_it] =
      std::minmax_element(image.pixels.begin(), image.pixels.end());
  if (!(*hi_it > *lo_it))
    throw DecodeError("qr: constant image cannot be thresholded");

  double threshold;
  if (policy == ThresholdPolicy::kMidpoint) {
    threshold = (*lo_it + *hi_it) / 2.0;
  } else {
    threshold = otsu_threshold(image.pixels);
  }

  BitMatrix m(image.width, image.height);
  for (std::size_t i = 0; i < image.pixels.size(); ++i)
    m.bits[i] = image.pixels[i] > threshold ? 1 : 0;
  return qr_decode(m);
}

}  // namespace spivc::qr
