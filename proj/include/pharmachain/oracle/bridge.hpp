#pragma once

// On-ledger half of the inbound oracle protocol: request registry, fee escrow,
// fulfillment callbacks and multi-node aggregation.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/storage.hpp"
#include "pharmachain/oracle/link.hpp"

namespace pharmachain::oracle {

enum class Field : std::uint8_t { Temperature = 0, Humidity = 1, Latitude = 2, Longitude = 3 };

inline constexpr std::array<Field, 4> kAllFields = {Field::Temperature, Field::Humidity, Field::Latitude,
                                                    Field::Longitude};

std::string_view field_name(Field f);               // "temperature"
std::string_view field_reading_key(Field f);        // JSON key in a telemetry reading: "temp"
std::optional<Field> parse_field(std::string_view);  // accepts either spelling
// Temperature and humidity travel as unsigned integers scaled by 10^2,
// latitude and longitude as signed integers scaled by 10^6.
bool field_is_signed(Field f);
std::int64_t field_scale(Field f);
// Rounds to the nearest integer step. Throws std::out_of_range for values the
// field's integer job type cannot carry (negative on an unsigned job).
std::int64_t scale_reading(Field f, double value);
double unscale(Field f, std::int64_t value);

struct FeeSchedule {
  // Fee for a standalone request*Data call, per field.
  std::map<Field, LinkAmount> per_request;
  // Requests a successful lifecycle operation issues for the item's SKU.
  std::map<std::string, std::vector<std::pair<Field, LinkAmount>>> per_action;

  // Every lifecycle action requests all four channels; per-request fees are a
  // quarter of the action's total (0.5 token for the first two actions, 0.4 for the rest).
  static FeeSchedule defaults();
  LinkAmount action_total(std::string_view operation) const;
};

struct OracleConfig {
  std::vector<Address> nodes;
  std::uint32_t quorum = 1;
  std::uint64_t timeout_ms = 60'000;
  std::string unsigned_job_id = "d5270d1c311941d0b08bead21fea7747";
  std::string signed_job_id = "ba1d5d5070a247eaa7070f838a42bb03";
  FeeSchedule fees = FeeSchedule::defaults();

  const std::string& job_for(Field f) const { return field_is_signed(f) ? signed_job_id : unsigned_job_id; }
  bool is_node(const Address& a) const;

  void encode(ByteWriter& w) const;
  static OracleConfig decode(ByteReader& r);
};

enum class RequestStatus : std::uint8_t { Pending = 0, Fulfilled = 1, Failed = 2, Expired = 3 };
std::string_view status_name(RequestStatus s);

struct OracleResponse {
  Address node;
  std::int64_t value = 0;
  bool ok = true;  // false: the node could not obtain the value (e.g. unknown SKU)

  bool operator==(const OracleResponse&) const = default;
};

struct OracleRequest {
  Hash256 id;
  std::string job_id;
  Address requester;  // contract account paying the fee
  Address initiator;  // transaction sender that caused the request
  std::string sku;
  Field field = Field::Temperature;
  std::string callback;
  LinkAmount fee;
  RequestStatus status = RequestStatus::Pending;
  std::string close_reason;
  std::uint64_t created_height = 0;
  std::uint64_t deadline_ms = 0;
  std::vector<OracleResponse> responses;
  std::optional<std::int64_t> result;
  std::uint64_t delivered_at = 0;  // block height of the closing transaction
  std::vector<std::pair<Address, LinkAmount>> payouts;
};

struct StoredValue {
  std::int64_t value = 0;
  Hash256 request_id;
  std::uint64_t block_height = 0;
};

// Median of the values; for an even count the lower of the two middle values,
// so the result is always one of the reported values.
std::int64_t median_value(std::vector<std::int64_t> values);

class OracleBridge {
 public:
  OracleBridge() = default;
  explicit OracleBridge(OracleConfig config) : config_(std::move(config)) {}

  const OracleConfig& config() const { return config_; }
  LinkLedger& link() { return link_; }
  const LinkLedger& link() const { return link_; }

  // Escrows the fee from the requester and records a pending request.
  // Throws InsufficientLink.
  const OracleRequest& request_data(const Hash256& request_id, const Address& requester, const Address& initiator,
                                    std::string sku, Field field, LinkAmount fee, std::uint64_t height,
                                    std::uint64_t now_ms);

  // One node's answer. Closes the request once `quorum` distinct nodes have
  // answered. Throws NotOracleNode, UnknownRequest, AlreadyFulfilled,
  // RequestExpired, DuplicateResponse.
  void submit_response(const Hash256& request_id, const OracleResponse& response, std::uint64_t height);

  // Single-node fulfillment: exactly-once, pays the whole fee to the node.
  void fulfill(const Hash256& request_id, const OracleResponse& response, std::uint64_t height);

  // Closes the request with the median of responses from distinct nodes and splits
  // the fee equally, remainder to the first responder. Throws QuorumNotReached
  // when fewer than `quorum` responses are supplied.
  void aggregate_fulfill(const Hash256& request_id, const std::vector<OracleResponse>& responses,
                         std::uint64_t height);

  // Closes pending requests whose deadline has passed and refunds their escrow.
  // Returns the ids that expired.
  std::vector<Hash256> expire(std::uint64_t now_ms, std::uint64_t height);

  const OracleRequest* find(const Hash256& id) const;
  const std::map<Hash256, OracleRequest>& requests() const { return requests_; }
  std::vector<const OracleRequest*> pending() const;
  const StoredValue* value(const std::string& sku, Field f) const;
  const std::map<std::pair<std::string, Field>, StoredValue>& values() const { return values_; }

  void export_to(ledger::KvMap& kv) const;
  void import_from(const ledger::KvMap& kv);

 private:
  OracleRequest& pending_request(const Hash256& id);
  void close(OracleRequest& req, const std::vector<OracleResponse>& responses, std::uint64_t height);

  OracleConfig config_;
  LinkLedger link_;
  std::map<Hash256, OracleRequest> requests_;
  std::map<std::pair<std::string, Field>, StoredValue> values_;
};

}  // namespace pharmachain::oracle
