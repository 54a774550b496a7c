#include "pharmachain/ledger/transaction.hpp"

namespace pharmachain::ledger {

void encode_value(ByteWriter& w, const Value& v) {
  w.u8(static_cast<std::uint8_t>(v.index()));
  std::visit(
      [&w](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::uint64_t>) {
          w.u64(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          w.i64(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          w.str(x);
        } else if constexpr (std::is_same_v<T, Address>) {
          w.raw(x.view());
        } else if constexpr (std::is_same_v<T, Hash256>) {
          w.raw(x.view());
        } else {
          w.u8(x ? 1 : 0);
        }
      },
      v);
}

Value decode_value(ByteReader& r) {
  switch (r.u8()) {
    case 0: return r.u64();
    case 1: return r.i64();
    case 2: return r.str();
    case 3: return Address::from_view(r.raw(20));
    case 4: return Hash256::from_view(r.raw(32));
    case 5: {
      auto b = r.u8();
      if (b > 1) throw DecodeError("bool argument out of range");
      return b == 1;
    }
    default: throw DecodeError("unknown argument tag");
  }
}

std::string value_to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, Address>) {
          return x.str();
        } else if constexpr (std::is_same_v<T, Hash256>) {
          return "0x" + x.hex();
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return std::to_string(x);
        }
      },
      v);
}

Transaction Transaction::make(const KeyPair& key, std::uint64_t nonce, std::string operation, Args args) {
  Transaction tx;
  tx.nonce = nonce;
  tx.sender = key.address();
  tx.sender_key = key.public_key();
  tx.operation = std::move(operation);
  tx.args = std::move(args);
  tx.signature = key.sign(tx.signing_payload());
  return tx;
}

Bytes Transaction::signing_payload() const {
  ByteWriter w;
  w.u64(nonce);
  w.raw(sender.view());
  w.raw(sender_key.view());
  w.str(operation);
  w.u32(static_cast<std::uint32_t>(args.size()));
  for (const auto& a : args) encode_value(w, a);
  return w.take();
}

bool Transaction::signature_valid() const {
  if (Address::from_public_key(sender_key) != sender) return false;
  return verify_signature(sender_key, signing_payload(), signature);
}

Bytes Transaction::encode() const {
  ByteWriter w;
  w.raw(signing_payload());
  w.raw(signature.view());
  return w.take();
}

Transaction Transaction::decode(ByteView data) {
  ByteReader r(data);
  Transaction tx;
  tx.nonce = r.u64();
  tx.sender = Address::from_view(r.raw(20));
  tx.sender_key = PublicKey::from_view(r.raw(32));
  tx.operation = r.str();
  auto n = r.u32();
  if (n > r.remaining()) throw DecodeError("argument count exceeds record");
  tx.args.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) tx.args.push_back(decode_value(r));
  tx.signature = Signature::from_view(r.raw(64));
  r.expect_done();
  return tx;
}

}  // namespace pharmachain::ledger
