#pragma once

// Replays the reference action sequence (deployment, four role grants, the
// thirteen lifecycle actions) on a simulated clock with the reference block
// intervals, and measures what the producer actually did.

#include <string>
#include <vector>

#include "json.hpp"

namespace pharmachain::node {

struct BlockTimeRow {
  std::uint64_t height = 0;
  std::string action;
  std::string operation;
  double interval_s = 0;  // measured: block timestamp minus parent timestamp
  double reference_s = 0;
  std::string link_fee;  // tokens escrowed by the block's transaction
  std::string reference_link_fee;
  bool success = true;  // the block's transaction, if any, succeeded
};

struct BlockTimeReport {
  std::vector<BlockTimeRow> rows;
  double total_s = 0;
  double mean_s = 0;
  double reported_mean_s = 0;
  bool intervals_match = false;
  bool fees_match = false;
  std::string note;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

BlockTimeReport simulate_block_times();

}  // namespace pharmachain::node
