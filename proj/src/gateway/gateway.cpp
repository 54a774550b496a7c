#include "pharmachain/gateway/gateway.hpp"

#include <algorithm>
#include <mutex>

namespace pharmachain::gateway {

std::string_view consume_status_name(ConsumeStatus s) {
  switch (s) {
    case ConsumeStatus::Accepted: return "Accepted";
    case ConsumeStatus::Duplicate: return "Duplicate";
    case ConsumeStatus::BadSignature: return "BadSignature";
    case ConsumeStatus::Malformed: return "MalformedMessage";
    case ConsumeStatus::UnknownNode: return "UnknownNode";
  }
  return "?";
}

nlohmann::json AuditRow::to_json() const {
  return {{"reading", reading.to_json()}, {"node_id", node_id}, {"rule", rule}, {"recorded_at", recorded_at_ms}};
}

AuditRow AuditRow::from_json(const nlohmann::json& j) {
  return {telemetry::TelemetryReading::from_json(j.at("reading")), j.at("node_id").get<std::string>(),
          j.at("rule").get<std::string>(), j.at("recorded_at").get<std::uint64_t>()};
}

std::map<std::string, PublicKey> load_node_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open node registry " + path.string());
  auto j = nlohmann::json::parse(in);
  std::map<std::string, PublicKey> out;
  for (auto& [id, key] : j.items()) out[id] = PublicKey::from_hex_string(key.get<std::string>());
  return out;
}

void save_node_registry(const std::filesystem::path& path, const std::map<std::string, PublicKey>& nodes) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, key] : nodes) j[id] = key.hex();
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << '\n';
}

Gateway::Gateway(GatewayOptions options, NotificationSink& sink) : options_(std::move(options)), sink_(sink) {
  if (!options_.data_dir) return;
  const auto& dir = *options_.data_dir;
  std::filesystem::create_directories(dir);
  // Rebuild both tables from their logs; nothing is re-evaluated or re-notified.
  if (std::ifstream in(dir / "messages.jsonl"); in) {
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      try {
        auto m = telemetry::SignedMessage::parse(line);
        seen_.insert({m.node_id, m.reading.timestamp, m.reading.sku});
        apply_latest(m.reading);
        ++stats_.accepted;
      } catch (const telemetry::TelemetryError&) {
        // a torn final line from a crash; skip it
      }
    }
  }
  if (std::ifstream in(dir / "audit.jsonl"); in) {
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      try {
        audit_.push_back(AuditRow::from_json(nlohmann::json::parse(line)));
      } catch (const std::exception&) {
      }
    }
  }
  message_log_.open(dir / "messages.jsonl", std::ios::app);
  audit_log_.open(dir / "audit.jsonl", std::ios::app);
}

void Gateway::register_node(const std::string& node_id, const PublicKey& key) {
  std::unique_lock lock(mu_);
  nodes_[node_id] = key;
}

void Gateway::apply_latest(const telemetry::TelemetryReading& r) {
  auto it = latest_.find(r.sku);
  if (it == latest_.end() || r.timestamp >= it->second.timestamp) latest_[r.sku] = r;
}

ConsumeStatus Gateway::consume(std::string_view message) {
  telemetry::SignedMessage m;
  try {
    m = telemetry::SignedMessage::parse(message);
  } catch (const telemetry::TelemetryError&) {
    std::unique_lock lock(mu_);
    ++stats_.malformed;
    return ConsumeStatus::Malformed;
  }

  std::unique_lock lock(mu_);
  auto node = nodes_.find(m.node_id);
  if (node == nodes_.end()) {
    ++stats_.unknown_node;
    return ConsumeStatus::UnknownNode;
  }
  if (!m.verify(node->second)) {
    ++stats_.bad_signature;
    return ConsumeStatus::BadSignature;
  }
  if (!seen_.insert({m.node_id, m.reading.timestamp, m.reading.sku}).second) {
    ++stats_.duplicates;
    return ConsumeStatus::Duplicate;
  }
  ++stats_.accepted;
  if (message_log_.is_open()) {
    message_log_ << m.serialize() << '\n';
    message_log_.flush();
  }

  auto now = options_.clock();
  for (const auto& rule : options_.rules.rules) {
    if (!rule.violated_by(m.reading)) continue;
    if (rule.audit) {
      AuditRow row{m.reading, m.node_id, rule.name, now};
      if (audit_log_.is_open()) {
        audit_log_ << row.to_json().dump() << '\n';
        audit_log_.flush();
      }
      audit_.push_back(std::move(row));
    }
    if (rule.notify) {
      Notification n;
      n.recipients = options_.recipients;
      n.subject = "Abnormal " + rule.field + " for shipment " + m.reading.sku + ": " + rule.field + " " +
                  comparator_symbol(rule.comparator) + " " + nlohmann::json(rule.threshold).dump();
      n.body = {{"rule", rule.name}, {"node_id", m.node_id}, {"reading", m.reading.to_json()}};
      n.sent_at_ms = now;
      sink_.send(n);
    }
  }
  apply_latest(m.reading);
  return ConsumeStatus::Accepted;
}

std::optional<telemetry::TelemetryReading> Gateway::latest(const std::string& sku) const {
  std::shared_lock lock(mu_);
  auto it = latest_.find(sku);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

std::vector<AuditRow> Gateway::audit(const std::string& sku, std::optional<std::int64_t> from,
                                     std::optional<std::int64_t> to) const {
  std::shared_lock lock(mu_);
  std::vector<AuditRow> out;
  for (const auto& row : audit_) {
    if (row.reading.sku != sku) continue;
    if (from && row.reading.timestamp < *from) continue;
    if (to && row.reading.timestamp > *to) continue;
    out.push_back(row);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AuditRow& a, const AuditRow& b) { return a.reading.timestamp < b.reading.timestamp; });
  return out;
}

std::vector<AuditRow> Gateway::audit_all() const {
  std::shared_lock lock(mu_);
  return audit_;
}

GatewayStats Gateway::stats() const {
  std::shared_lock lock(mu_);
  return stats_;
}

}  // namespace pharmachain::gateway
