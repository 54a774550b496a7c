#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pharmachain/bytes.hpp"
#include "pharmachain/crypto.hpp"

namespace pharmachain::ledger {

// One typed operation argument. The variant index is the wire tag.
using Value = std::variant<std::uint64_t, std::int64_t, std::string, Address, Hash256, bool>;
using Args = std::vector<Value>;

void encode_value(ByteWriter& w, const Value& v);
Value decode_value(ByteReader& r);
std::string value_to_string(const Value& v);

struct Transaction {
  std::uint64_t nonce = 0;
  Address sender;
  PublicKey sender_key;
  std::string operation;
  Args args;
  Signature signature;

  static Transaction make(const KeyPair& key, std::uint64_t nonce, std::string operation, Args args);

  // Canonical serialization of everything except the signature; this is what gets signed.
  Bytes signing_payload() const;
  Hash256 id() const { return sha256(signing_payload()); }
  // Signature verifies and the sender address is derived from sender_key.
  bool signature_valid() const;

  Bytes encode() const;
  static Transaction decode(ByteView data);
};

}  // namespace pharmachain::ledger
