#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spivc::rs {

// Systematic Reed-Solomon over GF(2^8) as used by QR symbols: the generator
// polynomial has roots α^0 .. α^(ec_len-1) and a codeword is data followed
// by the remainder of data·x^ec_len modulo the generator.

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Remainder codewords for the given data, length ec_len.
std::vector<std::uint8_t> ec_codewords(const std::vector<std::uint8_t>& data,
                                       int ec_len);

// Syndromes S_k = C(α^k), k = 0 .. ec_len-1; all zero iff the word is a
// codeword.
std::vector<std::uint8_t> syndromes(const std::vector<std::uint8_t>& codeword,
                                    int ec_len);

struct Corrected {
  std::vector<std::uint8_t> codeword;  // repaired data || ec
  int corrected = 0;                   // number of byte positions changed
};

// Berlekamp-Massey + Chien search + Forney. Repairs up to floor(ec_len/2)
// byte errors; throws DecodeError when the word is beyond repair, including
// when a candidate correction fails the syndrome recheck (the decoder never
// silently miscorrects to a different codeword than it verified).
Corrected correct(const std::vector<std::uint8_t>& codeword, int ec_len);

}  // namespace spivc::rs
