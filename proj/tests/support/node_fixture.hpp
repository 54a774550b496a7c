#pragma once

#include <chrono>
#include <filesystem>
#include <memory>

#include "pharmachain/ledger/schedule.hpp"
#include "pharmachain/node/node.hpp"
#include "pharmachain/node/service.hpp"

namespace fixture {

using namespace pharmachain;

inline node::Keystore demo_keys() {
  node::Keystore k;
  for (const auto& n : {"owner", "manufacturer", "distributor", "retailer", "consumer", "validator-0", "validator-1",
                        "validator-2", "oracle-0", "sensor-0"})
    k.create_deterministic(n);
  return k;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag = "pc") {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

// In-memory network that mines a block per transaction on a manual clock.
struct Net {
  ledger::ManualClock clock{1'700'000'000'000};
  node::NodeConfig cfg;
  std::unique_ptr<node::Node> node;
  std::unique_ptr<node::Service> service;
  std::unique_ptr<node::LocalTransport> api;

  explicit Net(bool enrol = true, std::function<void(node::NodeConfig&)> tweak = {}) {
    cfg.block_intervals_ms = {0};
    cfg.genesis_timestamp_ms = clock.now();
    if (tweak) tweak(cfg);
    node = std::make_unique<node::Node>(cfg, demo_keys(), clock.as_clock(), false);
    service = std::make_unique<node::Service>(*node);
    api = std::make_unique<node::LocalTransport>(*service);
    if (enrol) node::enrol_default_roles(*node);
  }

  node::Response tx(const std::string& account, const std::string& op, const nlohmann::json& args) {
    clock.advance(1000);
    return api->call("POST", "/tx/" + op, {{"account", account}, {"args", args}});
  }
};

}  // namespace fixture
