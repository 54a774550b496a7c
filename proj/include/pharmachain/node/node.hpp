#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

#include "pharmachain/ledger/ledger.hpp"
#include "pharmachain/node/config.hpp"
#include "pharmachain/node/keystore.hpp"
#include "pharmachain/supply/contract.hpp"

namespace pharmachain::node {

struct TxResult {
  Hash256 tx_id;
  bool included = false;
  std::uint64_t block_height = 0;
  ledger::Receipt receipt;
  std::vector<ledger::EventRecord> events;
};

// One PoA network in a single process: the ledger plus every validator key,
// taking turns on the configured block schedule.
class Node {
 public:
  // Reopens the chain in the config's data directory, or creates it with a
  // genesis block when the directory holds none. An empty data_dir keeps the
  // chain in memory.
  Node(NodeConfig config, Keystore keys, ledger::Clock clock = ledger::system_clock(), bool persistent = true);
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Starts the producer thread. Without it, produce() must be called by hand
  // unless the schedule is on-demand.
  void start();
  void stop();

  // Signs with the named account and submits. In on-demand mode the block is
  // produced before returning; otherwise waits up to `wait` for inclusion.
  TxResult submit(const std::string& account, std::string operation, ledger::Args args,
                  std::chrono::milliseconds wait = std::chrono::seconds(30));
  TxResult submit_signed(ledger::Transaction tx, std::chrono::milliseconds wait = std::chrono::seconds(30));
  // Inclusion status of a submitted transaction.
  TxResult result_for(const Hash256& id) const;
  // Produces the next block now with the scheduled validator.
  ledger::Block produce();
  // Produces the next block only once the schedule says it is due and there is
  // something to include (or allow_empty).
  std::optional<ledger::Block> try_produce(bool allow_empty = false);
  // Clock time at which the next block becomes due.
  std::uint64_t next_due_ms() const;

  ledger::Ledger& ledger() { return *ledger_; }
  const ledger::Ledger& ledger() const { return *ledger_; }
  const NodeConfig& config() const { return config_; }
  const ledger::IntervalSchedule& schedule() const { return schedule_; }

  // Keystore access is shared with the HTTP API, which can add accounts.
  Keystore keystore() const;
  const Account& add_account(const std::string& name);

  template <typename F>
  decltype(auto) with_contract(F&& f) const {
    return ledger_->read_state([&](const ledger::StateMachine& sm) -> decltype(auto) {
      return f(dynamic_cast<const supply::SupplyChainContract&>(sm));
    });
  }

 private:
  void producer_loop();
  TxResult submit_signed_admitted(const Hash256& id, std::chrono::milliseconds wait);

  NodeConfig config_;
  mutable std::shared_mutex keys_mu_;
  Keystore keys_;
  std::map<Address, KeyPair> validator_keys_;
  ledger::Clock clock_;
  ledger::IntervalSchedule schedule_;
  bool persistent_;
  int lock_fd_ = -1;
  std::unique_ptr<ledger::Ledger> ledger_;

  std::mutex submit_mu_;
  std::mutex produce_mu_;
  std::mutex wake_mu_;
  std::condition_variable wake_cv_;
  std::condition_variable mined_cv_;
  std::atomic<bool> running_{false};
  std::atomic<bool> poked_{false};
  std::thread producer_;
};

// The owner admits the keystore accounts named after each role ("manufacturer", ...)
// that do not hold it yet. Returns the results in role order.
std::vector<TxResult> enrol_default_roles(Node& node, std::chrono::milliseconds wait = std::chrono::seconds(60));

// Creates the keystore and config for a fresh network under dir: the owner, one
// account per role, the validators, an oracle node and a sensor. Deterministic
// keys are derived from the account names (for tests and reproducible demos).
NodeConfig init_network(const std::filesystem::path& dir, NodeConfig config = {}, bool deterministic = false);

}  // namespace pharmachain::node
