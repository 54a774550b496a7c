#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pharmachain/crypto.hpp"

namespace pharmachain::telemetry {

using nlohmann::json;

class TelemetryError : public std::runtime_error {
 public:
  TelemetryError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// One sensing-node sample. Serializes to exactly eight JSON keys:
// timestamp, lat, lng, sku, lot, drugName, temp, hum.
struct TelemetryReading {
  std::int64_t timestamp = 0;  // seconds since the Unix epoch
  double lat = 0;
  double lng = 0;
  std::string sku;
  std::string lot;
  std::string drug_name;
  double temp = 0;  // degrees Celsius
  double hum = 0;   // percent relative humidity

  json to_json() const;
  // Throws TelemetryError("MalformedMessage") on missing, extra or out-of-range fields.
  static TelemetryReading from_json(const json& j);
  // Reads a channel by its JSON key ("temp", "hum", "lat", "lng").
  double field(std::string_view key) const;

  bool operator==(const TelemetryReading&) const = default;
};

// Wire message: the reading's fields plus an envelope {node_id, signature}.
struct SignedMessage {
  TelemetryReading reading;
  std::string node_id;
  Signature signature;

  // Canonical bytes covered by the signature: the reading plus node_id as compact
  // JSON with sorted keys.
  std::string signing_text() const;
  std::string serialize() const;
  // Throws TelemetryError("MalformedMessage").
  static SignedMessage parse(std::string_view text);
  bool verify(const PublicKey& key) const;
};

SignedMessage sign_reading(const TelemetryReading& reading, std::string node_id, const KeyPair& key);

}  // namespace pharmachain::telemetry
