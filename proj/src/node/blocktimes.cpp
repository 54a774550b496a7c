#include "pharmachain/node/blocktimes.hpp"

#include <cstdio>
#include <sstream>

#include "pharmachain/node/node.hpp"
#include "pharmachain/reference_costs.hpp"

namespace pharmachain::node {

namespace {
constexpr std::uint64_t kUpc = 1;
constexpr std::uint64_t kStartMs = 1'700'000'000'000;

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}
}  // namespace

BlockTimeReport simulate_block_times() {
  Keystore keys;
  for (const auto& name : {"owner", "manufacturer", "distributor", "retailer", "consumer", "validator-0",
                           "validator-1", "validator-2", "oracle-0"})
    keys.create_deterministic(name);
  NodeConfig cfg;
  cfg.block_intervals_ms.clear();
  for (const auto& c : reference::kActionCosts) cfg.block_intervals_ms.push_back(c.block_time_s * 1000ULL);
  cfg.genesis_timestamp_ms = kStartMs;

  ledger::ManualClock clock(kStartMs);
  Node node(cfg, keys, clock.as_clock(), false);
  // Nobody answers the oracle here, so requests expire and refund; count fees at creation.
  auto fees_at = [&](std::uint64_t height) {
    return node.with_contract([&](const supply::SupplyChainContract& c) {
      oracle::LinkAmount sum;
      for (const auto& [id, r] : c.oracle().requests())
        if (r.created_height == height) sum += r.fee;
      return sum;
    });
  };

  BlockTimeReport report;
  for (const auto& cost : reference::kActionCosts) {
    BlockTimeRow row;
    row.action = std::string(cost.action);
    row.operation = std::string(cost.operation);
    row.reference_s = cost.block_time_s;
    row.reference_link_fee = std::string(cost.link_fee);

    std::optional<Hash256> tx;
    if (!cost.operation.empty()) {
      auto op = std::string(cost.operation);
      ledger::Args args;
      std::string account;
      if (op.starts_with("add")) {
        account = "owner";
        auto role = access::parse_role(op.substr(3));
        args = {keys.get(access::role_name(*role)).address()};
      } else {
        const auto* step = supply::find_lifecycle_step(op);
        account = std::string(access::role_name(step->role));
        args = op == "produceItemByManufacturer" ? ledger::Args{std::string("SKU-1"), std::string("Amoxicillin"), kUpc}
                                                 : ledger::Args{kUpc};
      }
      tx = node.submit(account, op, std::move(args), std::chrono::milliseconds(0)).tx_id;
    }

    auto parent_ts = node.ledger().tip_timestamp();
    // Step the clock one second at a time; the node mines only when the block is due.
    std::optional<ledger::Block> block;
    while (!(block = node.try_produce(/*allow_empty=*/!tx))) clock.advance(1000);
    row.height = block->height;
    row.interval_s = static_cast<double>(block->timestamp_ms - parent_ts) / 1000.0;
    row.link_fee = fees_at(block->height).tokens_string();
    if (tx) row.success = node.result_for(*tx).receipt.success;
    report.rows.push_back(std::move(row));
  }

  report.intervals_match = true;
  report.fees_match = true;
  for (const auto& r : report.rows) {
    report.total_s += r.interval_s;
    report.intervals_match = report.intervals_match && r.interval_s == r.reference_s && r.success;
    report.fees_match = report.fees_match && r.link_fee == r.reference_link_fee;
  }
  report.mean_s = report.total_s / static_cast<double>(report.rows.size());
  report.reported_mean_s = reference::kReportedAverageBlockTimeS;
  report.note = "mean of the " + std::to_string(report.rows.size()) + " block times is " +
                format("%.0f", report.total_s) + " s / " + std::to_string(report.rows.size()) + " = " +
                format("%.2f", report.mean_s) + " s; the quoted average transaction time is " +
                format("%.1f", report.reported_mean_s) + " s, which the block times do not reproduce";
  return report;
}

nlohmann::json BlockTimeReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : rows)
    list.push_back({{"height", r.height},
                    {"action", r.action},
                    {"operation", r.operation},
                    {"interval_s", r.interval_s},
                    {"reference_s", r.reference_s},
                    {"link_fee", r.link_fee},
                    {"reference_link_fee", r.reference_link_fee},
                    {"success", r.success}});
  return {{"rows", list},
          {"total_s", total_s},
          {"mean_s", mean_s},
          {"reported_mean_s", reported_mean_s},
          {"intervals_match", intervals_match},
          {"fees_match", fees_match},
          {"note", note}};
}

std::string BlockTimeReport::to_text() const {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%-6s %-32s %10s %8s %9s %8s\n", "height", "action", "interval_s", "ref_s",
                "link_fee", "ref_fee");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6llu %-32s %10.0f %8.0f %9s %8s\n", static_cast<unsigned long long>(r.height),
                  r.action.c_str(), r.interval_s, r.reference_s, r.link_fee.c_str(), r.reference_link_fee.c_str());
    out << line;
  }
  out << "total " << format("%.0f", total_s) << " s, mean " << format("%.3f", mean_s) << " s, reported "
      << format("%.1f", reported_mean_s) << " s\n";
  out << "intervals " << (intervals_match ? "match" : "DIFFER") << ", fees " << (fees_match ? "match" : "DIFFER")
      << '\n';
  out << "note: " << note << '\n';
  return out.str();
}

}  // namespace pharmachain::node
