#include "spivc/reed_solomon.hpp"

#include <algorithm>

#include "spivc/gf256.hpp"

namespace spivc::rs {

namespace gf = spivc::gf256;

namespace {

// (x - α^0)(x - α^1)...(x - α^(ec_len-1)), highest degree first.
std::vector<std::uint8_t> generator_poly(int ec_len) {
  std::vector<std::uint8_t> g{1};
  for (int i = 0; i < ec_len; ++i) {
    std::vector<std::uint8_t> next(g.size() + 1, 0);
    std::uint8_t root = gf::exp(i);
    for (std::size_t j = 0; j < g.size(); ++j) {
      next[j] ^= g[j];  // g * x
      next[j + 1] ^= gf::mul(g[j], root);
    }
    g = std::move(next);
  }
  return g;
}

// Evaluate a polynomial (highest degree first) at x via Horner.
std::uint8_t poly_eval(const std::vector<std::uint8_t>& p, std::uint8_t x) {
  std::uint8_t y = 0;
  for (std::uint8_t c : p) y = std::uint8_t(gf::mul(y, x) ^ c);
  return y;
}

}  // namespace

std::vector<std::uint8_t> ec_codewords(const std::vector<std::uint8_t>& data,
                                       int ec_len) {
  if (ec_len < 1) throw std::invalid_argument("rs: ec_len must be >= 1");
  if (data.size() + std::size_t(ec_len) > 255)
    throw std::invalid_argument("rs: codeword longer than 255 bytes");

  std::vector<std::uint8_t> g = generator_poly(ec_len);
  std::vector<std::uint8_t> rem(ec_len, 0);
  for (std::uint8_t d : data) {
    std::uint8_t factor = std::uint8_t(d ^ rem[0]);
    rem.erase(rem.begin());
    rem.push_back(0);
    for (int i = 0; i < ec_len; ++i)
      rem[i] ^= gf::mul(g[i + 1], factor);  // g[0] is always 1
  }
  return rem;
}

std::vector<std::uint8_t> syndromes(const std::vector<std::uint8_t>& codeword,
                                    int ec_len) {
  std::vector<std::uint8_t> s(ec_len);
  for (int k = 0; k < ec_len; ++k) s[k] = poly_eval(codeword, gf::exp(k));
  return s;
}

Corrected correct(const std::vector<std::uint8_t>& codeword, int ec_len) {
  if (ec_len < 1) throw std::invalid_argument("rs: ec_len must be >= 1");
  if (codeword.size() <= std::size_t(ec_len) || codeword.size() > 255)
    throw std::invalid_argument("rs: bad codeword length");

  std::vector<std::uint8_t> synd = syndromes(codeword, ec_len);
  if (std::all_of(synd.begin(), synd.end(), [](std::uint8_t s) { return s == 0; }))
    return {codeword, 0};

  // Berlekamp-Massey: error locator Λ with Λ(X_j^-1) = 0 at error locators
  // X_j = α^position.
  std::vector<std::uint8_t> lambda{1};
  std::vector<std::uint8_t> prev{1};
  std::uint8_t prev_disc = 1;
  int m = 1, errors = 0;
  for (int k = 0; k < ec_len; ++k) {
    std::uint8_t disc = synd[k];
    for (int i = 1; i <= errors; ++i)
      if (i < int(lambda.size()))
        disc ^= gf::mul(lambda[i], synd[k - i]);
    if (disc == 0) {
      ++m;
    } else if (2 * errors <= k) {
      std::vector<std::uint8_t> saved = lambda;
      std::uint8_t scale = gf::div(disc, prev_disc);
      lambda.resize(std::max(lambda.size(), prev.size() + m), 0);
      for (std::size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] ^= gf::mul(scale, prev[i]);
      errors = k + 1 - errors;
      prev = std::move(saved);
      prev_disc = disc;
      m = 1;
    } else {
      std::uint8_t scale = gf::div(disc, prev_disc);
      lambda.resize(std::max(lambda.size(), prev.size() + m), 0);
      for (std::size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] ^= gf::mul(scale, prev[i]);
      ++m;
    }
  }
  while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
  int degree = int(lambda.size()) - 1;
  if (degree < 1 || 2 * degree > ec_len)
    throw DecodeError("rs: error count exceeds correction capacity");

  // Chien search over all valid positions. Positions index from the highest
  // degree coefficient, i.e. codeword[i] weights x^(n-1-i).
  int n = int(codeword.size());
  std::vector<int> positions;
  for (int pos = 0; pos < n; ++pos) {
    std::uint8_t x_inv = gf::exp(255 - ((n - 1 - pos) % 255));
    std::uint8_t acc = 0;
    std::uint8_t xp = 1;
    for (std::uint8_t c : lambda) {
      acc ^= gf::mul(c, xp);
      xp = gf::mul(xp, x_inv);
    }
    if (acc == 0) positions.push_back(pos);
  }
  if (int(positions.size()) != degree)
    throw DecodeError("rs: error locator roots do not match its degree");

  // Forney: error magnitude e_j = X_j * Ω(X_j^-1) / Λ'(X_j^-1) with the
  // evaluator Ω = S·Λ mod x^ec_len (syndromes start at α^0, so c = 0).
  std::vector<std::uint8_t> omega(ec_len, 0);
  for (int i = 0; i < ec_len; ++i)
    for (std::size_t j = 0; j < lambda.size() && int(j) <= i; ++j)
      omega[i] ^= gf::mul(synd[i - j], lambda[j]);

  Corrected result{codeword, degree};
  for (int pos : positions) {
    std::uint8_t x = gf::exp((n - 1 - pos) % 255);
    std::uint8_t x_inv = gf::inv(x);
    std::uint8_t om = 0, xp = 1;
    for (int i = 0; i < ec_len; ++i) {
      om ^= gf::mul(omega[i], xp);
      xp = gf::mul(xp, x_inv);
    }
    // Λ'(x) keeps only odd-degree terms over GF(2^m).
    std::uint8_t lp = 0;
    xp = 1;
    for (std::size_t i = 1; i < lambda.size(); i += 2) {
      lp ^= gf::mul(lambda[i], xp);
      xp = gf::mul(xp, gf::mul(x_inv, x_inv));
    }
    if (lp == 0) throw DecodeError("rs: Forney derivative vanished");
    result.codeword[pos] ^= gf::mul(x, gf::div(om, lp));
  }

  // A wrong locator can still produce the right root count; only accept a
  // repair that is verifiably a codeword again.
  std::vector<std::uint8_t> recheck = syndromes(result.codeword, ec_len);
  if (!std::all_of(recheck.begin(), recheck.end(),
                   [](std::uint8_t s) { return s == 0; }))
    throw DecodeError("rs: corrected word fails syndrome recheck");
  return result;
}

}  // namespace spivc::rs
