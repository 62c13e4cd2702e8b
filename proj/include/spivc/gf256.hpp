#pragma once

#include <array>
#include <cstdint>

namespace spivc::gf256 {

// GF(2^8) under the field polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d),
// with 2 as the generator. exp is doubled so mul can skip a modular
// reduction of the summed logs.

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t{};
  int x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = std::uint8_t(x);
    t.exp[i + 255] = std::uint8_t(x);
    t.log[x] = std::uint8_t(i);
    x <<= 1;
    if (x & 0x100) x ^= 0x11d;
  }
  t.exp[510] = t.exp[0];
  t.exp[511] = t.exp[1];
  return t;
}

inline constexpr Tables kTables = make_tables();

constexpr std::uint8_t exp(int i) { return kTables.exp[i % 255]; }
constexpr std::uint8_t log(std::uint8_t a) { return kTables.log[a]; }

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

constexpr std::uint8_t inv(std::uint8_t a) {
  return kTables.exp[255 - kTables.log[a]];  // undefined for a = 0 by contract
}

constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (a == 0) return 0;
  return kTables.exp[kTables.log[a] + 255 - kTables.log[b]];
}

constexpr std::uint8_t pow(std::uint8_t a, int e) {
  if (a == 0) return 0;
  int l = (kTables.log[a] * (e % 255)) % 255;
  if (l < 0) l += 255;
  return kTables.exp[l];
}

}  // namespace spivc::gf256
