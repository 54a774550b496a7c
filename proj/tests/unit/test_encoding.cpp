#include "doctest.h"

#include "pharmachain/bytes.hpp"
#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/block.hpp"
#include "pharmachain/ledger/storage.hpp"
#include "pharmachain/ledger/transaction.hpp"

using namespace pharmachain;

TEST_CASE("byte writer is big-endian with length prefixes") {
  ByteWriter w;
  w.u16(0x0102);
  w.u32(0x03040506);
  w.u64(0x0708090a0b0c0d0eULL);
  w.str("ab");
  CHECK(to_hex(w.bytes()) == "0102030405060708090a0b0c0d0e0000000261" "62");

  ByteReader r(w.bytes());
  CHECK(r.u16() == 0x0102);
  CHECK(r.u32() == 0x03040506);
  CHECK(r.u64() == 0x0708090a0b0c0d0eULL);
  CHECK(r.str() == "ab");
  CHECK(r.done());
  CHECK_THROWS_AS(r.u8(), DecodeError);
}

TEST_CASE("hex round trip accepts a 0x prefix") {
  CHECK(from_hex("0xDEADbeef") == Bytes{0xde, 0xad, 0xbe, 0xef});
  CHECK_THROWS(from_hex("abc"));
  CHECK_THROWS(from_hex("zz"));
}

TEST_CASE("sha256 matches the standard test vector") {
  CHECK(sha256(std::string_view("abc")).hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("address is the last 20 bytes of the public-key hash") {
  auto k = KeyPair::from_label("alice");
  auto digest = sha256(k.public_key().view());
  auto a = Address::from_public_key(k.public_key());
  CHECK(a.str() == "0x" + digest.hex().substr(24));
  CHECK(a.str().size() == 42);
  CHECK(Address::from_public_key(k.public_key()) == a);
  CHECK(Address::parse(a.str()) == a);
  auto upper = a.str();
  for (std::size_t i = 2; i < upper.size(); ++i) upper[i] = static_cast<char>(std::toupper(upper[i]));
  CHECK(Address::parse(upper) == a);
  CHECK_THROWS(Address::parse("0x1234"));
}

TEST_CASE("labelled keys are deterministic and distinct") {
  CHECK(KeyPair::from_label("a").address() == KeyPair::from_label("a").address());
  CHECK(KeyPair::from_label("a").address() != KeyPair::from_label("b").address());
}

TEST_CASE("signatures verify and reject forgeries") {
  auto k = KeyPair::from_label("signer");
  Bytes msg{1, 2, 3};
  auto sig = k.sign(msg);
  CHECK(verify_signature(k.public_key(), msg, sig));
  msg[0] = 9;
  CHECK_FALSE(verify_signature(k.public_key(), msg, sig));
}

TEST_CASE("transaction encoding round trips and signs its payload") {
  auto k = KeyPair::from_label("sender");
  auto tx = ledger::Transaction::make(k, 1, "produceItemByManufacturer",
                                      {std::string("SKU-1"), std::string("Acetaminophen"), std::uint64_t{42}});
  CHECK(tx.signature_valid());
  auto back = ledger::Transaction::decode(tx.encode());
  CHECK(back.id() == tx.id());
  CHECK(back.args == tx.args);
  CHECK(back.signature == tx.signature);

  SUBCASE("zeroed signature is invalid") {
    tx.signature = Signature{};
    CHECK_FALSE(tx.signature_valid());
  }
  SUBCASE("sender must match the key") {
    tx.sender = KeyPair::from_label("other").address();
    CHECK_FALSE(tx.signature_valid());
  }
  SUBCASE("id covers nonce and arguments") {
    auto other = ledger::Transaction::make(k, 2, tx.operation, tx.args);
    CHECK(other.id() != tx.id());
    auto other_args = ledger::Transaction::make(k, 1, tx.operation, {std::string("SKU-2"), std::string("x"),
                                                                       std::uint64_t{42}});
    CHECK(other_args.id() != tx.id());
  }
}

TEST_CASE("every value tag round trips") {
  ledger::Args args{std::uint64_t{7}, std::int64_t{-5}, std::string("s"), KeyPair::from_label("x").address(),
                    sha256(std::string_view("h")), true};
  for (std::size_t i = 0; i < args.size(); ++i) CHECK(args[i].index() == i);
  ByteWriter w;
  for (const auto& v : args) ledger::encode_value(w, v);
  ByteReader r(w.bytes());
  for (const auto& v : args) CHECK(ledger::decode_value(r) == v);
  CHECK(r.done());
}

TEST_CASE("block hash covers the body and the validator signs it") {
  auto v = KeyPair::from_label("validator");
  ledger::Block b;
  b.height = 3;
  b.timestamp_ms = 1234;
  b.transactions.push_back(ledger::Transaction::make(KeyPair::from_label("s"), 1, "renounceConsumer", {}));
  b.receipts.push_back({b.transactions[0].id(), true, "", "", ""});
  b.events.push_back({"ProducedByManufacturer", 9, 3, b.transactions[0].id()});
  b.seal(v);
  CHECK(b.validator == v.address());
  CHECK(b.block_hash == sha256(b.encode_body()));
  CHECK(verify_signature(v.public_key(), b.block_hash.view(), b.validator_signature));

  auto record = b.encode();
  auto decoded = ledger::decode_block(record);
  CHECK(decoded.body_size == b.encode_body().size());
  CHECK(decoded.block.block_hash == b.block_hash);
  CHECK(decoded.block.events == b.events);
  CHECK(decoded.block.receipts == b.receipts);
}

TEST_CASE("kv encoding is canonical and hashable") {
  ledger::KvMap a{{"b", {2}}, {"a", {1}}};
  ledger::KvMap b;
  b["a"] = {1};
  b["b"] = {2};
  CHECK(ledger::encode_kv(a) == ledger::encode_kv(b));
  CHECK(ledger::hash_kv(a) == ledger::hash_kv(b));
  auto bytes = ledger::encode_kv(a);
  ByteReader r(bytes);
  CHECK(ledger::decode_kv(r) == a);
}
