#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pharmachain/bytes.hpp"
#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/transaction.hpp"

namespace pharmachain::ledger {

struct EventRecord {
  std::string name;
  std::uint64_t upc = 0;
  std::uint64_t block_height = 0;
  Hash256 tx_id;

  bool operator==(const EventRecord&) const = default;
};

// Execution outcome of one included transaction. Failed transactions stay in
// the block with success == false and contribute no events.
struct Receipt {
  Hash256 tx_id;
  bool success = false;
  std::string error;   // error code, e.g. "GuardFailed"
  std::string detail;  // e.g. the failing guard name
  std::string result;  // operation return value, if any

  bool operator==(const Receipt&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  Hash256 parent_hash;
  std::uint64_t timestamp_ms = 0;
  Address validator;
  Hash256 state_root;
  std::vector<Transaction> transactions;
  std::vector<Receipt> receipts;
  std::vector<EventRecord> events;
  Hash256 block_hash;
  Signature validator_signature;

  // Everything that block_hash commits to, in canonical order.
  Bytes encode_body() const;
  // body || block_hash || validator_signature
  Bytes encode() const;

  // Fills block_hash and validator_signature from the current contents.
  void seal(const KeyPair& validator_key);
};

struct DecodedBlock {
  Block block;
  std::size_t body_size = 0;  // prefix of the record covered by block_hash
};

DecodedBlock decode_block(ByteView record);

}  // namespace pharmachain::ledger
