#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "spivc/measure.hpp"

namespace spivc {

// MeasurementSeries ↔ JSON: {"values": [...], "meta": {...}}. Doubles use
// the shortest decimal that round-trips, so values survive a save/load cycle
// bit-exactly.
nlohmann::json series_to_json(const MeasurementSeries& series);
MeasurementSeries series_from_json(const nlohmann::json& j);

MeasurementSeries read_series(const std::string& path);
void write_series(const MeasurementSeries& series, const std::string& path);

}  // namespace spivc
