#include "pharmachain/telemetry/reading.hpp"

#include <array>
#include <cmath>

namespace pharmachain::telemetry {

namespace {
constexpr std::array<std::string_view, 8> kReadingKeys = {"timestamp", "lat", "lng", "sku",
                                                          "lot",       "drugName", "temp", "hum"};

[[noreturn]] void malformed(const std::string& why) { throw TelemetryError("MalformedMessage", why); }

double number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) malformed(std::string(key) + " is not a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) malformed(std::string(key) + " is not finite");
  return d;
}

std::string text(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) malformed(std::string(key) + " is not a string");
  return v.get<std::string>();
}
}  // namespace

json TelemetryReading::to_json() const {
  return json{{"timestamp", timestamp}, {"lat", lat},   {"lng", lng},   {"sku", sku},
              {"lot", lot},             {"drugName", drug_name}, {"temp", temp}, {"hum", hum}};
}

TelemetryReading TelemetryReading::from_json(const json& j) {
  if (!j.is_object()) malformed("reading is not an object");
  for (auto key : kReadingKeys)
    if (!j.contains(key)) malformed("missing field " + std::string(key));
  TelemetryReading r;
  const auto& ts = j.at("timestamp");
  if (!ts.is_number_integer()) malformed("timestamp is not an integer");
  r.timestamp = ts.get<std::int64_t>();
  r.lat = number(j, "lat");
  r.lng = number(j, "lng");
  r.sku = text(j, "sku");
  r.lot = text(j, "lot");
  r.drug_name = text(j, "drugName");
  r.temp = number(j, "temp");
  r.hum = number(j, "hum");
  if (r.sku.empty()) malformed("empty sku");
  if (r.lat < -90 || r.lat > 90) malformed("lat out of range");
  if (r.lng < -180 || r.lng > 180) malformed("lng out of range");
  if (r.hum < 0 || r.hum > 100) malformed("hum out of range");
  return r;
}

double TelemetryReading::field(std::string_view key) const {
  if (key == "temp" || key == "temperature") return temp;
  if (key == "hum" || key == "humidity") return hum;
  if (key == "lat" || key == "latitude") return lat;
  if (key == "lng" || key == "longitude") return lng;
  throw std::invalid_argument("unknown telemetry field " + std::string(key));
}

std::string SignedMessage::signing_text() const {
  auto j = reading.to_json();
  j["node_id"] = node_id;
  return j.dump();
}

std::string SignedMessage::serialize() const {
  auto j = reading.to_json();
  j["node_id"] = node_id;
  j["signature"] = signature.hex();
  return j.dump();
}

SignedMessage SignedMessage::parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("message is not an object");
  if (j.size() != kReadingKeys.size() + 2) malformed("unexpected field count");
  if (!j.contains("node_id") || !j["node_id"].is_string()) malformed("missing node_id");
  if (!j.contains("signature") || !j["signature"].is_string()) malformed("missing signature");
  SignedMessage m;
  m.node_id = j["node_id"].get<std::string>();
  try {
    m.signature = Signature::from_hex_string(j["signature"].get<std::string>());
  } catch (const std::exception&) {
    malformed("signature is not 64 hex bytes");
  }
  j.erase("node_id");
  j.erase("signature");
  m.reading = TelemetryReading::from_json(j);
  return m;
}

bool SignedMessage::verify(const PublicKey& key) const {
  auto t = signing_text();
  return verify_signature(key, ByteView(reinterpret_cast<const std::uint8_t*>(t.data()), t.size()), signature);
}

SignedMessage sign_reading(const TelemetryReading& reading, std::string node_id, const KeyPair& key) {
  SignedMessage m{reading, std::move(node_id), {}};
  auto t = m.signing_text();
  m.signature = key.sign(ByteView(reinterpret_cast<const std::uint8_t*>(t.data()), t.size()));
  return m;
}

}  // namespace pharmachain::telemetry
