#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace pharmachain::telemetry {

struct Breakpoint {
  double t = 0;  // seconds from scenario start
  double lat = 0;
  double lng = 0;
  double temp = 0;
  double hum = 0;
};

struct Sample {
  double lat = 0;
  double lng = 0;
  double temp = 0;
  double hum = 0;
};

// Replayable environment profile for one shipment.
//
// Between breakpoints every channel is interpolated linearly; before the first and
// after the last the signal is held constant. Two breakpoints at the same time
// form a step: the later one applies from that instant on.
struct Scenario {
  std::string sku;
  std::string lot;
  std::string drug_name;
  std::int64_t start_timestamp = 0;  // seconds since the Unix epoch
  std::vector<Breakpoint> breakpoints;

  Sample at(double t) const;

  nlohmann::json to_json() const;
  // Throws TelemetryError("MalformedScenario").
  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::filesystem::path& path);
};

}  // namespace pharmachain::telemetry
