#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spivc/patterns.hpp"
#include "spivc/raster.hpp"

namespace spivc {

enum class NoiseKind { kNone, kAdditiveGaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double sigma = 0.0;  // std dev as a fraction of the mean noiseless value
  std::uint64_t seed = 0;
};

// Provenance carried alongside measurement values so downstream stages can
// regenerate the illumination and audit the noise treatment.
struct SeriesMeta {
  std::string scheme = "single";  // "single" | "combined"
  int width = 0;
  int height = 0;
  int count = 0;
  std::vector<std::uint64_t> seeds;  // one per pattern sequence involved
  NoiseModel noise;
};

struct MeasurementSeries {
  std::vector<double> values;
  SeriesMeta meta;
};

// Bucket detector: value n is the inner product of the object with pattern n.
MeasurementSeries measure(const Image& object, const PatternSequence& patterns);

// One detector, several objects each under its own illumination; the
// detector only sees the sum of the per-object signals.
MeasurementSeries measure_combined(const std::vector<Image>& objects,
                                   const std::vector<PatternSequence>& sequences);

// Additive Gaussian noise, std = sigma * mean(values). Deterministic in the
// model seed; value n only consumes counters derived from n.
MeasurementSeries add_noise(const MeasurementSeries& series,
                            const NoiseModel& model);

}  // namespace spivc
