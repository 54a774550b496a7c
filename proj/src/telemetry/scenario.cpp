#include "pharmachain/telemetry/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "pharmachain/telemetry/reading.hpp"

namespace pharmachain::telemetry {

namespace {
[[noreturn]] void malformed(const std::string& why) { throw TelemetryError("MalformedScenario", why); }

double lerp(double a, double b, double f) { return a + (b - a) * f; }
}  // namespace

Sample Scenario::at(double t) const {
  if (breakpoints.empty()) malformed("scenario has no breakpoints");
  auto next = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                               [](double v, const Breakpoint& b) { return v < b.t; });
  if (next == breakpoints.begin()) {
    const auto& b = breakpoints.front();
    return {b.lat, b.lng, b.temp, b.hum};
  }
  const auto& prev = *(next - 1);
  if (next == breakpoints.end() || prev.t == t) return {prev.lat, prev.lng, prev.temp, prev.hum};
  double f = (t - prev.t) / (next->t - prev.t);
  return {lerp(prev.lat, next->lat, f), lerp(prev.lng, next->lng, f), lerp(prev.temp, next->temp, f),
          lerp(prev.hum, next->hum, f)};
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json bps = nlohmann::json::array();
  for (const auto& b : breakpoints)
    bps.push_back({{"t", b.t}, {"lat", b.lat}, {"lng", b.lng}, {"temp", b.temp}, {"hum", b.hum}});
  return {{"sku", sku},
          {"lot", lot},
          {"drugName", drug_name},
          {"start_timestamp", start_timestamp},
          {"breakpoints", bps}};
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    s.sku = j.at("sku").get<std::string>();
    s.lot = j.value("lot", std::string());
    s.drug_name = j.value("drugName", std::string());
    s.start_timestamp = j.value("start_timestamp", std::int64_t{0});
    for (const auto& b : j.at("breakpoints")) {
      Breakpoint bp;
      bp.t = b.at("t").get<double>();
      bp.lat = b.at("lat").get<double>();
      bp.lng = b.at("lng").get<double>();
      bp.temp = b.at("temp").get<double>();
      bp.hum = b.at("hum").get<double>();
      s.breakpoints.push_back(bp);
    }
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
  if (s.sku.empty()) malformed("scenario has no sku");
  if (s.breakpoints.empty()) malformed("scenario has no breakpoints");
  for (std::size_t i = 1; i < s.breakpoints.size(); ++i)
    if (s.breakpoints[i].t < s.breakpoints[i - 1].t) malformed("breakpoints are not in time order");
  for (const auto& b : s.breakpoints) {
    if (b.lat < -90 || b.lat > 90 || b.lng < -180 || b.lng > 180) malformed("position out of range");
    if (b.hum < 0 || b.hum > 100) malformed("humidity out of range");
  }
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
  return from_json(j);
}

}  // namespace pharmachain::telemetry
