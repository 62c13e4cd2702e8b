#pragma once

#include <vector>

namespace spivc {

// Otsu's histogram threshold over 256 uniform bins spanning [min, max].
// Returns the first split maximizing the between-class variance; when the
// histogram is single-mode (no split separates anything) falls back to the
// midpoint of the range. Values equal to the returned threshold belong to
// the lower class, i.e. classify with (v > threshold).
// Throws std::invalid_argument on empty or constant input.
double otsu_threshold(const std::vector<double>& values);

}  // namespace spivc
