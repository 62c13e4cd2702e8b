#include "spivc/measure.hpp"

#include <numeric>
#include <stdexcept>

#include "spivc/hashing.hpp"

namespace spivc {

namespace {

double bucket_value(const Image& object, const BitMatrix& pattern) {
  double acc = 0.0;
  for (std::size_t i = 0; i < object.pixels.size(); ++i)
    if (pattern.bits[i]) acc += object.pixels[i];
  return acc;
}

}  // namespace

MeasurementSeries measure(const Image& object, const PatternSequence& patterns) {
  check_object(object);
  if (patterns.count() == 0)
    throw std::invalid_argument("measure: empty pattern sequence");
  check_same_dims(object.width, object.height, patterns.width, patterns.height,
                  "measure");

  MeasurementSeries out;
  out.values.reserve(patterns.count());
  for (const BitMatrix& p : patterns.patterns)
    out.values.push_back(bucket_value(object, p));

  out.meta.scheme = "single";
  out.meta.width = patterns.width;
  out.meta.height = patterns.height;
  out.meta.count = patterns.count();
  out.meta.seeds = {patterns.seed};
  return out;
}

MeasurementSeries measure_combined(const std::vector<Image>& objects,
                                   const std::vector<PatternSequence>& sequences) {
  if (objects.empty() || objects.size() != sequences.size())
    throw std::invalid_argument(
        "measure_combined: need one pattern sequence per object");
  int count = sequences.front().count();
  for (const PatternSequence& s : sequences) {
    if (s.count() != count)
      throw std::invalid_argument(
          "measure_combined: sequences disagree on length");
    if (count == 0)
      throw std::invalid_argument("measure_combined: empty pattern sequence");
  }

  MeasurementSeries out;
  out.values.assign(count, 0.0);
  out.meta.scheme = "combined";
  out.meta.count = count;
  // The series records a single geometry, so all arms must share one; the
  // detector itself would not care, but downstream reconstruction does.
  out.meta.width = sequences.front().width;
  out.meta.height = sequences.front().height;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    check_object(objects[k]);
    check_same_dims(objects[k].width, objects[k].height, sequences[k].width,
                    sequences[k].height, "measure_combined");
    check_same_dims(sequences[k].width, sequences[k].height, out.meta.width,
                    out.meta.height, "measure_combined");
    for (int n = 0; n < count; ++n)
      out.values[n] += bucket_value(objects[k], sequences[k].patterns[n]);
    out.meta.seeds.push_back(sequences[k].seed);
  }
  return out;
}

MeasurementSeries add_noise(const MeasurementSeries& series,
                            const NoiseModel& model) {
  if (series.values.empty())
    throw std::invalid_argument("add_noise: empty measurement series");
  if (model.kind == NoiseKind::kNone) return series;
  if (model.sigma < 0.0)
    throw std::invalid_argument("add_noise: sigma must be non-negative");

  double mean =
      std::accumulate(series.values.begin(), series.values.end(), 0.0) /
      double(series.values.size());
  double std_dev = model.sigma * mean;

  MeasurementSeries out = series;
  for (std::size_t n = 0; n < out.values.size(); ++n)
    out.values[n] += std_dev * gaussian(model.seed, std::uint64_t(n));
  out.meta.noise = model;
  return out;
}

}  // namespace spivc
