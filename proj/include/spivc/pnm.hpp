#pragma once

#include <string>

#include "spivc/raster.hpp"

namespace spivc {

// Portable anymap I/O.
//
// PBM stores 1 = black; BitMatrix stores 1 = light. The conversion is
// inverted at this boundary in both directions so in-memory semantics stay
// uniform.
//
// PGM is 8-bit: writing maps [min, max] linearly onto 0..255 (a constant
// image writes as mid-gray 128). That quantization is lossy, so full
// precision travels through the JSON form below instead.

BitMatrix read_pbm(const std::string& path);
void write_pbm(const BitMatrix& m, const std::string& path, bool binary = true);

Image read_pgm(const std::string& path);  // raw samples scaled to [0, 1] by maxval
void write_pgm(const Image& img, const std::string& path, bool binary = true);

// Lossless raster exchange: {"width", "height", "values"} with values in
// row-major order, doubles round-tripping exactly.
Image read_image_json(const std::string& path);
void write_image_json(const Image& img, const std::string& path);

// Dispatch on extension: .pbm (bits as 0/1 intensities), .pgm, .json.
Image read_image_any(const std::string& path);

}  // namespace spivc
