#pragma once

#include "spivc/raster.hpp"

namespace spivc::sample {

// "OK" secret glyph: a 12x7 master bitmap scaled by an integer factor and
// centered on the requested canvas. scale = 0 picks
// max(1, floor(min(width, height) / 17)), sized so the glyph stays well
// inside a symbol's data area. Throws when the scaled glyph does not fit.
BitMatrix ok_glyph(int width, int height, int scale = 0);

// Deterministic piecewise-smooth grayscale test object in [0, 1]: a bright
// central body with a few secondary blobs on a gentle background ramp,
// quantized to 8 bits. `variant` reshapes the layout (variant 1 is the
// conventional "second object" check).
Image scene(int width, int height, int variant = 0);

}  // namespace spivc::sample
