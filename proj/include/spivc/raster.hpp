#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spivc {

// Grayscale raster, row-major, real intensities.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // size width*height, index r*width + c

  Image() = default;
  Image(int w, int h, double fill = 0.0);

  double& at(int r, int c) { return pixels[std::size_t(r) * width + c]; }
  double at(int r, int c) const { return pixels[std::size_t(r) * width + c]; }
  std::size_t size() const { return pixels.size(); }
};

// Binary raster, row-major. Bit 1 is light/foreground, 0 is dark/background.
struct BitMatrix {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitMatrix() = default;
  BitMatrix(int w, int h, std::uint8_t fill = 0);

  std::uint8_t& at(int r, int c) { return bits[std::size_t(r) * width + c]; }
  std::uint8_t at(int r, int c) const { return bits[std::size_t(r) * width + c]; }
  std::size_t size() const { return bits.size(); }
  bool operator==(const BitMatrix&) const = default;
};

// Validation helpers; all throw std::invalid_argument with a short reason.
void check_dims(int width, int height);
void check_finite(const Image& img, const std::string& what = "image");
void check_object(const Image& img);  // finite and non-negative
void check_bits(const BitMatrix& m);
void check_same_dims(int w1, int h1, int w2, int h2, const std::string& what);

// Bits as 0/1 intensities.
Image to_image(const BitMatrix& m);

}  // namespace spivc
