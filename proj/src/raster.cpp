#include "spivc/raster.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spivc {

Image::Image(int w, int h, double fill) : width(w), height(h) {
  check_dims(w, h);
  pixels.assign(std::size_t(w) * h, fill);
}

BitMatrix::BitMatrix(int w, int h, std::uint8_t fill) : width(w), height(h) {
  check_dims(w, h);
  bits.assign(std::size_t(w) * h, fill);
}

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("raster dimensions must be positive");
  // Keep index arithmetic comfortably inside size_t/double territory.
  if (std::size_t(width) * std::size_t(height) > std::size_t(1) << 30)
    throw std::invalid_argument("raster dimensions too large");
}

void check_finite(const Image& img, const std::string& what) {
  check_dims(img.width, img.height);
  if (img.pixels.size() != std::size_t(img.width) * img.height)
    throw std::invalid_argument(what + ": pixel buffer does not match dimensions");
  for (double v : img.pixels)
    if (!std::isfinite(v))
      throw std::invalid_argument(what + ": non-finite pixel value");
}

void check_object(const Image& img) {
  check_finite(img, "object");
  for (double v : img.pixels)
    if (v < 0.0) throw std::invalid_argument("object: negative pixel value");
}

void check_bits(const BitMatrix& m) {
  check_dims(m.width, m.height);
  if (m.bits.size() != std::size_t(m.width) * m.height)
    throw std::invalid_argument("bit matrix: buffer does not match dimensions");
  for (std::uint8_t b : m.bits)
    if (b > 1) throw std::invalid_argument("bit matrix: entry is not 0 or 1");
}

void check_same_dims(int w1, int h1, int w2, int h2, const std::string& what) {
  if (w1 != w2 || h1 != h2)
    throw std::invalid_argument(what + ": dimension mismatch (" +
                                std::to_string(w1) + "x" + std::to_string(h1) +
                                " vs " + std::to_string(w2) + "x" +
                                std::to_string(h2) + ")");
}

Image to_image(const BitMatrix& m) {
  check_bits(m);
  Image img(m.width, m.height);
  for (std::size_t i = 0; i < m.bits.size(); ++i) img.pixels[i] = m.bits[i];
  return img;
}

}  // namespace spivc
