#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/block.hpp"
#include "pharmachain/ledger/state_machine.hpp"
#include "pharmachain/ledger/storage.hpp"

namespace pharmachain::ledger {

class LedgerError : public std::runtime_error {
 public:
  LedgerError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ValidatorInfo {
  std::string name;
  PublicKey key;
  Address address() const { return Address::from_public_key(key); }
};

// Round-robin Proof-of-Authority schedule over a fixed, ordered validator list.
class ValidatorSet {
 public:
  ValidatorSet() = default;
  explicit ValidatorSet(std::vector<ValidatorInfo> validators);

  const ValidatorInfo& scheduled(std::uint64_t height) const;
  const ValidatorInfo* find(const Address& a) const;
  std::size_t size() const { return validators_.size(); }
  const std::vector<ValidatorInfo>& members() const { return validators_; }

 private:
  std::vector<ValidatorInfo> validators_;
};

struct ChainVerification {
  bool ok = true;
  std::optional<std::uint64_t> first_bad_height;
  std::string reason;
};

// Checks framing, hashes, parent links, heights, the validator schedule and
// every signature. Stops at the earliest violation.
ChainVerification verify_records(const std::vector<Bytes>& records, const ValidatorSet& validators);

struct SubmitReceipt {
  Hash256 tx_id;
  std::string status = "pending";
};

class Mempool {
 public:
  void push(Transaction tx);
  std::vector<Transaction> drain();
  std::optional<std::uint64_t> pending_nonce(const Address& sender) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::deque<Transaction> queue_;
  std::map<Address, std::uint64_t> pending_nonce_;
};

struct LedgerOptions {
  ValidatorSet validators;
  std::uint64_t genesis_timestamp_ms = 0;
  // When set, blocks go to <data_dir>/chain.log and state to <data_dir>/state.snapshot.
  std::optional<std::filesystem::path> data_dir;
};

struct TxLocation {
  std::uint64_t height = 0;
  std::size_t index = 0;
};

class Ledger {
 public:
  // Starts a new chain: the genesis block (height 0, no transactions, zero parent)
  // is produced by validators[0].
  static std::unique_ptr<Ledger> create(LedgerOptions options, std::unique_ptr<StateMachine> genesis_state,
                                        const KeyPair& genesis_validator);
  // Reopens <data_dir>. State comes from the snapshot when it matches the log tip,
  // otherwise from replaying the longest verifiable prefix.
  static std::unique_ptr<Ledger> open(LedgerOptions options, std::unique_ptr<StateMachine> genesis_state);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  SubmitReceipt submit_transaction(Transaction tx);
  // Next nonce the sender must use, counting transactions already in the mempool.
  std::uint64_t next_nonce(const Address& sender) const;

  Block produce_block(std::uint64_t now_ms, const KeyPair& validator_key);

  ChainVerification verify_chain() const;
  // Re-executes every block from genesis. Throws LedgerError("ChainCorrupt") if the
  // chain does not verify, or ("ReplayDivergence") if receipts/state roots differ.
  std::unique_ptr<StateMachine> replay() const;

  std::uint64_t tip_height() const;
  std::uint64_t tip_timestamp() const;
  Block block(std::uint64_t height) const;
  std::vector<Bytes> raw_records() const;
  std::optional<TxLocation> locate(const Hash256& tx_id) const;
  std::optional<Receipt> receipt(const Hash256& tx_id) const;
  std::vector<EventRecord> events_for_upc(std::uint64_t upc) const;
  std::vector<EventRecord> all_events() const;

  Hash256 state_root() const;
  std::uint64_t confirmed_nonce(const Address& sender) const;
  std::size_t mempool_size() const { return mempool_.size(); }
  const ValidatorSet& validators() const { return options_.validators; }

  // Runs f(const StateMachine&) under a shared lock.
  template <typename F>
  decltype(auto) read_state(F&& f) const {
    std::shared_lock lock(mu_);
    return f(static_cast<const StateMachine&>(*state_));
  }

 private:
  Ledger(LedgerOptions options, std::unique_ptr<StateMachine> state);

  struct Executed {
    std::vector<Receipt> receipts;
    std::vector<EventRecord> events;
  };
  static Executed execute(StateMachine& sm, std::map<Address, std::uint64_t>& nonces, const BlockContext& ctx,
                          const std::vector<Transaction>& txs);
  static KvMap merged_state(const StateMachine& sm, const std::map<Address, std::uint64_t>& nonces);
  static void import_merged(StateMachine& sm, std::map<Address, std::uint64_t>& nonces, const KvMap& kv);

  void append_locked(const Block& b, Bytes record);
  void persist_snapshot_locked() const;

  LedgerOptions options_;
  std::unique_ptr<StateMachine> state_;
  std::map<Address, std::uint64_t> nonces_;

  std::vector<Block> blocks_;
  std::vector<Bytes> records_;
  std::map<Hash256, TxLocation> tx_index_;
  std::unique_ptr<BlockLog> log_;

  Mempool mempool_;
  mutable std::shared_mutex mu_;
  std::mutex admission_mu_;
};

}  // namespace pharmachain::ledger
