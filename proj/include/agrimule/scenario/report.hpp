#pragma once

#include <string>
#include <vector>

#include "agrimule/store/telemetry_store.hpp"
#include "json.hpp"

namespace agrimule::scenario {

/// Run summary computed from the log alone, so a replay reproduces it.
/// Percentiles use the nearest-rank method.
nlohmann::ordered_json build_report(const store::StoreHeader& header, const std::vector<store::Record>& records);
nlohmann::ordered_json build_report(const store::TelemetryStore& store);

/// Stable text form (two-space indent, trailing newline).
std::string report_text(const nlohmann::ordered_json& report);

} // namespace agrimule::scenario
