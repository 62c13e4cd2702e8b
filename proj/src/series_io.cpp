#include "spivc/series_io.hpp"

#include <fstream>
#include <stdexcept>

namespace spivc {

namespace {

std::string noise_name(NoiseKind kind) {
  return kind == NoiseKind::kAdditiveGaussian ? "additive-gaussian" : "none";
}

NoiseKind noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::kNone;
  if (name == "additive-gaussian") return NoiseKind::kAdditiveGaussian;
  throw std::runtime_error("unknown noise kind '" + name + "'");
}

}  // namespace

nlohmann::json series_to_json(const MeasurementSeries& series) {
  nlohmann::json meta;
  meta["scheme"] = series.meta.scheme;
  meta["width"] = series.meta.width;
  meta["height"] = series.meta.height;
  meta["count"] = series.meta.count;
  meta["seeds"] = series.meta.seeds;
  meta["noise"] = {{"kind", noise_name(series.meta.noise.kind)},
                   {"sigma", series.meta.noise.sigma},
                   {"seed", series.meta.noise.seed}};
  return nlohmann::json{{"values", series.values}, {"meta", meta}};
}

MeasurementSeries series_from_json(const nlohmann::json& j) {
  MeasurementSeries s;
  s.values = j.at("values").get<std::vector<double>>();
  const nlohmann::json& meta = j.at("meta");
  s.meta.scheme = meta.at("scheme").get<std::string>();
  s.meta.width = meta.at("width").get<int>();
  s.meta.height = meta.at("height").get<int>();
  s.meta.count = meta.at("count").get<int>();
  s.meta.seeds = meta.at("seeds").get<std::vector<std::uint64_t>>();
  if (meta.contains("noise")) {
    const nlohmann::json& n = meta.at("noise");
    s.meta.noise.kind = noise_kind(n.at("kind").get<std::string>());
    s.meta.noise.sigma = n.at("sigma").get<double>();
    s.meta.noise.seed = n.at("seed").get<std::uint64_t>();
  }
  if (s.values.size() != std::size_t(s.meta.count))
    throw std::runtime_error("measurement series: count does not match values");
  return s;
}

MeasurementSeries read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
    return series_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid series JSON: " + e.what());
  }
}

void write_series(const MeasurementSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << series_to_json(series).dump() << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace spivc
