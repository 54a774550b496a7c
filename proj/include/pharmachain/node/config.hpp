#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pharmachain/ledger/ledger.hpp"
#include "pharmachain/ledger/schedule.hpp"
#include "pharmachain/node/keystore.hpp"
#include "pharmachain/supply/contract.hpp"

namespace pharmachain::node {

// Deployment description shared by every process of one network. Relative
// paths are resolved against the directory holding the config file.
struct NodeConfig {
  std::filesystem::path base_dir = ".";
  std::filesystem::path data_dir = "chain";
  std::filesystem::path keystore = "keystore.json";

  std::string host = "127.0.0.1";
  std::uint16_t port = 8545;

  std::vector<std::string> validators = {"validator-0", "validator-1", "validator-2"};
  std::string owner = "owner";
  // One entry: fixed interval. Several: replayed cyclically. {0}: a block per submission.
  std::vector<std::uint64_t> block_intervals_ms = {4000};
  std::uint64_t genesis_timestamp_ms = 0;  // 0: the time of initialization
  std::string initial_link = "1000";
  oracle::FeeSchedule fees = oracle::FeeSchedule::defaults();

  struct Oracle {
    std::vector<std::string> nodes = {"oracle-0"};
    std::uint32_t quorum = 1;
    std::uint64_t timeout_ms = 60'000;
    std::uint64_t poll_interval_ms = 1000;
    std::string gateway_url = "http://127.0.0.1:8081";
  } oracle;

  struct Gateway {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8081;
    std::optional<std::filesystem::path> rules_file;
    std::vector<std::string> recipients = {"quality@example.com"};
    std::filesystem::path data_dir = "gateway";
    std::filesystem::path outbox = "gateway/outbox.jsonl";
    std::filesystem::path nodes_file = "sensors.json";
  } gateway;

  struct Broker {
    std::string host = "127.0.0.1";
    std::uint16_t port = 1883;
    std::string topic = "pharmachain/telemetry";
  } broker;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : base_dir / p;
  }
  std::string node_url() const { return "http://" + host + ":" + std::to_string(port); }

  nlohmann::json to_json() const;
  static NodeConfig from_json(const nlohmann::json& j, std::filesystem::path base_dir = ".");
  static NodeConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  ledger::IntervalSchedule schedule() const { return ledger::IntervalSchedule(block_intervals_ms); }
  ledger::ValidatorSet validator_set(const Keystore& keys) const;
  supply::GenesisConfig genesis(const Keystore& keys) const;
};

}  // namespace pharmachain::node
