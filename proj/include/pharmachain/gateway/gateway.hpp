#pragma once

// Telemetry ingestion: authenticate, apply threshold rules, keep the
// latest-value and abnormal-reading tables, notify registered parties.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/gateway/notifications.hpp"
#include "pharmachain/gateway/rules.hpp"
#include "pharmachain/ledger/schedule.hpp"
#include "pharmachain/telemetry/reading.hpp"

namespace pharmachain::gateway {

enum class ConsumeStatus { Accepted, Duplicate, BadSignature, Malformed, UnknownNode };
std::string_view consume_status_name(ConsumeStatus s);

struct AuditRow {
  telemetry::TelemetryReading reading;
  std::string node_id;
  std::string rule;
  std::uint64_t recorded_at_ms = 0;

  nlohmann::json to_json() const;
  static AuditRow from_json(const nlohmann::json& j);
};

struct GatewayStats {
  std::uint64_t accepted = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t bad_signature = 0;
  std::uint64_t malformed = 0;
  std::uint64_t unknown_node = 0;
};

struct GatewayOptions {
  RuleSet rules = RuleSet::defaults();
  std::vector<std::string> recipients;
  // When set: <data_dir>/messages.jsonl holds accepted messages, <data_dir>/audit.jsonl the audit table.
  std::optional<std::filesystem::path> data_dir;
  ledger::Clock clock = ledger::system_clock();
};

// node_id -> public key, stored as {"sensor-0": "<hex>", ...}.
std::map<std::string, PublicKey> load_node_registry(const std::filesystem::path& path);
void save_node_registry(const std::filesystem::path& path, const std::map<std::string, PublicKey>& nodes);

class Gateway {
 public:
  Gateway(GatewayOptions options, NotificationSink& sink);

  void register_node(const std::string& node_id, const PublicKey& key);
  ConsumeStatus consume(std::string_view message);

  std::optional<telemetry::TelemetryReading> latest(const std::string& sku) const;
  // Rows for sku whose reading timestamp lies in [from, to], oldest first.
  std::vector<AuditRow> audit(const std::string& sku, std::optional<std::int64_t> from = std::nullopt,
                              std::optional<std::int64_t> to = std::nullopt) const;
  std::vector<AuditRow> audit_all() const;
  GatewayStats stats() const;
  const GatewayOptions& options() const { return options_; }

 private:
  using DedupKey = std::tuple<std::string, std::int64_t, std::string>;
  void apply_latest(const telemetry::TelemetryReading& r);

  GatewayOptions options_;
  NotificationSink& sink_;
  mutable std::shared_mutex mu_;
  std::map<std::string, PublicKey> nodes_;
  std::map<std::string, telemetry::TelemetryReading> latest_;
  std::set<DedupKey> seen_;
  std::vector<AuditRow> audit_;
  GatewayStats stats_;
  std::ofstream message_log_;
  std::ofstream audit_log_;
};

}  // namespace pharmachain::gateway
