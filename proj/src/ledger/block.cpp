#include "pharmachain/ledger/block.hpp"

namespace pharmachain::ledger {

Bytes Block::encode_body() const {
  ByteWriter w;
  w.u64(height);
  w.raw(parent_hash.view());
  w.u64(timestamp_ms);
  w.raw(validator.view());
  w.raw(state_root.view());

  w.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) w.blob(tx.encode());

  w.u32(static_cast<std::uint32_t>(receipts.size()));
  for (const auto& r : receipts) {
    w.raw(r.tx_id.view());
    w.u8(r.success ? 1 : 0);
    w.str(r.error);
    w.str(r.detail);
    w.str(r.result);
  }

  w.u32(static_cast<std::uint32_t>(events.size()));
  for (const auto& e : events) {
    w.str(e.name);
    w.u64(e.upc);
    w.u64(e.block_height);
    w.raw(e.tx_id.view());
  }
  return w.take();
}

Bytes Block::encode() const {
  ByteWriter w;
  w.raw(encode_body());
  w.raw(block_hash.view());
  w.raw(validator_signature.view());
  return w.take();
}

void Block::seal(const KeyPair& validator_key) {
  validator = validator_key.address();
  block_hash = sha256(encode_body());
  validator_signature = validator_key.sign(block_hash.view());
}

DecodedBlock decode_block(ByteView record) {
  ByteReader r(record);
  DecodedBlock out;
  Block& b = out.block;
  b.height = r.u64();
  b.parent_hash = Hash256::from_view(r.raw(32));
  b.timestamp_ms = r.u64();
  b.validator = Address::from_view(r.raw(20));
  b.state_root = Hash256::from_view(r.raw(32));

  auto tx_count = r.u32();
  if (tx_count > r.remaining()) throw DecodeError("transaction count exceeds record");
  for (std::uint32_t i = 0; i < tx_count; ++i) {
    auto blob = r.blob();
    b.transactions.push_back(Transaction::decode(blob));
  }

  auto receipt_count = r.u32();
  if (receipt_count > r.remaining()) throw DecodeError("receipt count exceeds record");
  for (std::uint32_t i = 0; i < receipt_count; ++i) {
    Receipt rc;
    rc.tx_id = Hash256::from_view(r.raw(32));
    auto flag = r.u8();
    if (flag > 1) throw DecodeError("receipt status out of range");
    rc.success = flag == 1;
    rc.error = r.str();
    rc.detail = r.str();
    rc.result = r.str();
    b.receipts.push_back(std::move(rc));
  }

  auto event_count = r.u32();
  if (event_count > r.remaining()) throw DecodeError("event count exceeds record");
  for (std::uint32_t i = 0; i < event_count; ++i) {
    EventRecord e;
    e.name = r.str();
    e.upc = r.u64();
    e.block_height = r.u64();
    e.tx_id = Hash256::from_view(r.raw(32));
    b.events.push_back(std::move(e));
  }

  out.body_size = r.offset();
  b.block_hash = Hash256::from_view(r.raw(32));
  b.validator_signature = Signature::from_view(r.raw(64));
  r.expect_done();
  return out;
}

}  // namespace pharmachain::ledger
