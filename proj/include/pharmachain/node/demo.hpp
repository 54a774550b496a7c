#pragma once

// End-to-end run of one item through every lifecycle state with the whole stack
// live: sensing node -> broker -> gateway (HTTP) -> oracle node -> ledger.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pharmachain/ledger/block.hpp"
#include "pharmachain/telemetry/scenario.hpp"

namespace pharmachain::node {

struct DemoOptions {
  std::uint64_t upc = 1001;
  std::optional<telemetry::Scenario> scenario;  // default: a steady 2-8 C cold-chain profile
  std::uint64_t sensor_interval_s = 60;
  std::uint64_t block_interval_ms = 0;  // 0: a block per transaction
  std::optional<std::filesystem::path> data_dir;  // default: in memory
};

struct DemoResult {
  std::vector<ledger::EventRecord> events;  // lifecycle events for the item, in order
  int final_state = -1;
  bool authentic = false;
  std::size_t readings_published = 0;
  std::size_t audit_rows = 0;
  std::size_t oracle_fulfilled = 0;
  std::string link_spent;
};

telemetry::Scenario default_scenario();

DemoResult run_demo(const DemoOptions& options, std::ostream& out);

}  // namespace pharmachain::node
