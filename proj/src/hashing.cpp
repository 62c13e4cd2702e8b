#include "spivc/hashing.hpp"

#include <cmath>
#include <numbers>

namespace spivc {

double gaussian(std::uint64_t seed, std::uint64_t n) {
  double u1 = unit_open_double(counter_hash(seed, kDomainGaussian, n, 0));
  double u2 = unit_open_double(counter_hash(seed, kDomainGaussian, n, 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace spivc
