#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/storage.hpp"
#include "pharmachain/ledger/transaction.hpp"

namespace pharmachain::ledger {

struct BlockContext {
  std::uint64_t height = 0;
  std::uint64_t timestamp_ms = 0;
};

struct TxContext {
  BlockContext block;
  Hash256 tx_id;
  Address caller;
};

struct TxOutcome {
  bool success = false;
  std::string error;
  std::string detail;
  std::string result;
  // (event name, upc) in emission order; only populated on success.
  std::vector<std::pair<std::string, std::uint64_t>> events;
};

// Deterministic contract executor driven by the ledger. Implementations must
// leave their state untouched when apply() reports failure.
class StateMachine {
 public:
  virtual ~StateMachine() = default;

  virtual bool knows_operation(std::string_view name) const = 0;
  // Runs once per block before any transaction (e.g. oracle request expiry).
  virtual void begin_block(const BlockContext& ctx) = 0;
  virtual TxOutcome apply(const Transaction& tx, const TxContext& ctx) = 0;

  virtual KvMap export_state() const = 0;
  virtual void import_state(const KvMap& kv) = 0;
  Hash256 state_hash() const { return hash_kv(export_state()); }

  // A new instance in the genesis state this one was created from.
  virtual std::unique_ptr<StateMachine> fresh_genesis() const = 0;
};

}  // namespace pharmachain::ledger
