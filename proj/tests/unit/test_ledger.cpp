#include <functional>
#include <filesystem>

#include "doctest.h"

#include "../support/chain_fixture.hpp"
#include "pharmachain/ledger/schedule.hpp"

using namespace pharmachain;
using fixture::Actors;
using fixture::Chain;

namespace {
// Offset of the transaction list inside an encoded block: height, parent, timestamp, validator, state root.
constexpr std::size_t kTxListOffset = 8 + 32 + 8 + 20 + 32;

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ledger::LedgerError& e) {
    return e.code();
  }
  return "";
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pharmachain-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

// Re-signs a modified block with its scheduled validator so that only the link to the next block breaks.
Bytes reseal(const Bytes& record, const KeyPair& key) {
  auto b = ledger::decode_block(record).block;
  b.timestamp_ms += 1;
  b.seal(key);
  return b.encode();
}
}  // namespace

TEST_CASE("genesis block") {
  Chain c;
  CHECK(c.ledger->tip_height() == 0);
  auto g = c.ledger->block(0);
  CHECK(g.parent_hash.is_zero());
  CHECK(g.validator == c.validators[0].address());
  CHECK(c.ledger->verify_chain().ok);
}

TEST_CASE("submission checks") {
  Chain c;
  auto m = KeyPair::from_label("m");
  auto produce = ledger::Transaction::make(c.owner, 1, "produceItemByManufacturer",
                                           {std::string("SKU-1"), std::string("Acetaminophen"), std::uint64_t{7}});

  SUBCASE("well signed transaction is pending") {
    auto r = c.ledger->submit_transaction(produce);
    CHECK(r.status == "pending");
    CHECK(r.tx_id == produce.id());
    CHECK(c.ledger->mempool_size() == 1);
  }
  SUBCASE("reused nonce") {
    c.ledger->submit_transaction(produce);
    c.produce();
    auto again = ledger::Transaction::make(c.owner, 1, "renounceConsumer", {});
    CHECK(code_of([&] { c.ledger->submit_transaction(again); }) == "BadNonce");
    auto skip = ledger::Transaction::make(c.owner, 3, "renounceConsumer", {});
    CHECK(code_of([&] { c.ledger->submit_transaction(skip); }) == "BadNonce");
  }
  SUBCASE("nonce counts pending transactions") {
    c.ledger->submit_transaction(produce);
    CHECK(c.ledger->next_nonce(c.owner.address()) == 2);
    CHECK(code_of([&] { c.ledger->submit_transaction(produce); }) == "BadNonce");
  }
  SUBCASE("zeroed signature") {
    produce.signature = Signature{};
    CHECK(code_of([&] { c.ledger->submit_transaction(produce); }) == "InvalidSignature");
  }
  SUBCASE("unknown operation") {
    auto bad = ledger::Transaction::make(m, 1, "mintMoney", {});
    CHECK(code_of([&] { c.ledger->submit_transaction(bad); }) == "UnknownOperation");
  }
}

TEST_CASE("block production") {
  Chain c;
  SUBCASE("empty mempool still yields a block") {
    auto b = c.produce();
    CHECK(b.height == 1);
    CHECK(b.transactions.empty());
    CHECK(b.parent_hash == c.ledger->block(0).block_hash);
    CHECK(b.validator == c.validators[1].address());
  }
  SUBCASE("wrong validator is refused") {
    CHECK(code_of([&] { c.ledger->produce_block(c.now_ms, c.validators[0]); }) == "NotScheduledValidator");
    CHECK(code_of([&] { c.ledger->produce_block(c.now_ms, KeyPair::from_label("outsider")); }) ==
          "NotScheduledValidator");
  }
  SUBCASE("two lifecycle transactions in one block emit events in order") {
    Actors a;
    a.enrol(c);
    c.submit(a.manufacturer, "produceItemByManufacturer",
             {std::string("SKU-1"), std::string("Acetaminophen"), std::uint64_t{7}});
    c.submit(a.manufacturer, "sellItemByManufacturer", {std::uint64_t{7}});
    auto b = c.produce();
    REQUIRE(b.events.size() == 2);
    CHECK(b.events[0].name == "ProducedByManufacturer");
    CHECK(b.events[0].upc == 7);
    CHECK(b.events[1].name == "UpdateInventoryByManufacturer");
    CHECK(b.events[1].upc == 7);
    CHECK(b.events[0].block_height == b.height);
  }
  SUBCASE("failed transaction is included without events") {
    auto stranger = KeyPair::from_label("stranger");
    auto id = c.submit(stranger, "produceItemByManufacturer",
                       {std::string("SKU-1"), std::string("x"), std::uint64_t{1}});
    auto b = c.produce();
    REQUIRE(b.transactions.size() == 1);
    CHECK_FALSE(b.receipts[0].success);
    CHECK(b.receipts[0].error == "GuardFailed");
    CHECK(b.receipts[0].detail == "onlyManufacturer");
    CHECK(b.events.empty());
    CHECK(c.ledger->confirmed_nonce(stranger.address()) == 1);
    CHECK(c.ledger->locate(id)->height == 1);
  }
  SUBCASE("timestamps never decrease") {
    auto first = c.produce();
    auto b = c.ledger->produce_block(first.timestamp_ms - 100, c.scheduled());
    CHECK(b.timestamp_ms == first.timestamp_ms);
  }
  SUBCASE("a submitted transaction lands in the next block") {
    auto id = c.submit(c.owner, "renounceConsumer");
    c.produce();
    CHECK(c.ledger->locate(id).has_value());
  }
}

TEST_CASE("chain verification") {
  Chain c;
  for (int i = 0; i < 9; ++i) {
    c.submit(c.owner, i % 2 ? "renounceConsumer" : "requestTemperatureData",
             i % 2 ? ledger::Args{} : ledger::Args{std::string("SKU-1")});
    c.produce();
  }
  REQUIRE(c.ledger->tip_height() == 9);
  auto records = c.ledger->raw_records();
  auto vs = c.ledger->validators();

  SUBCASE("untouched chain verifies") { CHECK(ledger::verify_records(records, vs).ok); }
  SUBCASE("flipping a byte in block 4's transactions fails at 4") {
    REQUIRE(!c.ledger->block(4).transactions.empty());
    records[4][kTxListOffset + 10] ^= 0x01;
    auto v = ledger::verify_records(records, vs);
    CHECK_FALSE(v.ok);
    CHECK(*v.first_bad_height == 4);
  }
  SUBCASE("rewriting block 4 with a fresh hash fails at 5") {
    records[4] = reseal(records[4], c.validators[4 % 3]);
    auto v = ledger::verify_records(records, vs);
    CHECK_FALSE(v.ok);
    CHECK(*v.first_bad_height == 5);
    CHECK(v.reason.find("parent") != std::string::npos);
  }
  SUBCASE("block signed by the wrong validator") {
    records[4] = reseal(records[4], c.validators[0]);
    auto v = ledger::verify_records(records, vs);
    CHECK(*v.first_bad_height == 4);
  }
  SUBCASE("truncated record") {
    records[7].resize(records[7].size() / 2);
    CHECK(*ledger::verify_records(records, vs).first_bad_height == 7);
  }
}

TEST_CASE("replay") {
  SUBCASE("empty chain replays to genesis") {
    Chain c;
    auto sm = c.ledger->replay();
    CHECK(sm->state_hash() == c.contract().fresh_genesis()->state_hash());
    CHECK(sm->state_hash() == c.contract().state_hash());
  }
  SUBCASE("full lifecycle replays to the live state") {
    Chain c;
    Actors a;
    a.enrol(c);
    c.call(a.manufacturer, "produceItemByManufacturer", {std::string("SKU-1"), std::string("A"), std::uint64_t{1}});
    for (const auto& [op, key] : std::vector<std::pair<std::string, const KeyPair*>>{
             {"sellItemByManufacturer", &a.manufacturer},   {"purchaseItemByDistributor", &a.distributor},
             {"shippedItemByManufacturer", &a.manufacturer}, {"receivedItemByDistributor", &a.distributor},
             {"processedItemByDistributor", &a.distributor}, {"packageItemByDistributor", &a.distributor},
             {"sellItemByDistributor", &a.distributor},      {"purchaseItemByRetailer", &a.retailer},
             {"shippedItemByDistributor", &a.distributor},   {"receivedItemByRetailer", &a.retailer},
             {"sellItemByRetailer", &a.retailer},            {"purchaseItemByConsumer", &a.consumer}}) {
      CHECK(c.call(*key, op, {std::uint64_t{1}}).success);
    }
    CHECK(c.contract().fetch_item_details(1).state == supply::ShipmentState::PurchasedByConsumer);
    auto sm = c.ledger->replay();
    CHECK(sm->state_hash() == c.contract().state_hash());
    CHECK(sm->export_state() == c.contract().export_state());
  }
  SUBCASE("failed transaction fails identically on replay") {
    Chain c1;
    Chain c2;
    auto stranger = KeyPair::from_label("stranger");
    for (auto* c : {&c1, &c2}) {
      c->submit(stranger, "sellItemByManufacturer", {std::uint64_t{99}});
      c->submit(c->owner, "addRetailer", {stranger.address()});
      c->produce();
    }
    auto b = c1.ledger->block(1);
    CHECK_FALSE(b.receipts[0].success);
    CHECK(b.receipts[1].success);
    CHECK(b.receipts == c2.ledger->block(1).receipts);
    CHECK(c1.ledger->replay()->state_hash() == c2.ledger->replay()->state_hash());
    CHECK(c1.ledger->state_root() == c2.ledger->state_root());
  }
  SUBCASE("corrupt chain is refused") {
    // Tamper through the persistence path: reopen from a damaged log.
    auto dir = temp_dir("replay-corrupt");
    Chain d(3, dir);
    d.produce();
    d.produce();
    auto contents = ledger::BlockLog::read_all(dir / "chain.log");
    contents.records[1][20] ^= 0xff;
    ledger::BlockLog::write_all(dir / "chain.log", contents.records);
    d.ledger.reset();
    auto reopened = ledger::Ledger::open(d.options(dir), std::make_unique<supply::SupplyChainContract>(d.genesis));
    CHECK(code_of([&] { reopened->replay(); }) == "ChainCorrupt");
    CHECK(*reopened->verify_chain().first_bad_height == 1);
  }
}

TEST_CASE("persistence") {
  auto dir = temp_dir("persist");
  Hash256 root;
  std::uint64_t tip = 0;
  {
    Chain c(3, dir);
    Actors a;
    a.enrol(c);
    c.call(a.manufacturer, "produceItemByManufacturer", {std::string("SKU-9"), std::string("A"), std::uint64_t{9}});
    root = c.ledger->state_root();
    tip = c.ledger->tip_height();
  }
  Chain proto;  // same genesis config
  auto open = [&] {
    return ledger::Ledger::open(proto.options(dir), std::make_unique<supply::SupplyChainContract>(proto.genesis));
  };

  SUBCASE("reopen from snapshot") {
    auto l = open();
    CHECK(l->tip_height() == tip);
    CHECK(l->state_root() == root);
    CHECK(l->verify_chain().ok);
  }
  SUBCASE("missing snapshot is rebuilt from the log") {
    std::filesystem::remove(dir / "state.snapshot");
    auto l = open();
    CHECK(l->state_root() == root);
  }
  SUBCASE("stale snapshot is ignored") {
    auto snap = *ledger::read_snapshot(dir / "state.snapshot");
    snap.height -= 1;
    snap.entries.clear();
    ledger::write_snapshot(dir / "state.snapshot", snap);
    auto l = open();
    CHECK(l->state_root() == root);
  }
  SUBCASE("chain keeps growing after reopen") {
    auto l = open();
    auto b = l->produce_block(proto.now_ms + 100'000, proto.validators[(tip + 1) % 3]);
    CHECK(b.height == tip + 1);
    CHECK(l->verify_chain().ok);
    l.reset();
    CHECK(open()->tip_height() == tip + 1);
  }
  SUBCASE("create refuses an existing log") {
    CHECK(code_of([&] { Chain again(3, dir); }) == "AlreadyInitialized");
  }
  SUBCASE("truncated tail is kept as a bad final record") {
    auto size = std::filesystem::file_size(dir / "chain.log");
    std::filesystem::resize_file(dir / "chain.log", size - 5);
    auto contents = ledger::BlockLog::read_all(dir / "chain.log");
    CHECK(contents.truncated_tail);
    CHECK(contents.records.size() == tip + 1);
    auto l = open();
    CHECK(*l->verify_chain().first_bad_height == tip);
    CHECK(code_of([&] { l->produce_block(proto.now_ms + 100'000, proto.validators[(tip + 1) % 3]); }) ==
          "ChainCorrupt");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("interval schedule") {
  ledger::IntervalSchedule s({8000, 4000, 4000});
  CHECK(s.interval_before(0) == 0);
  CHECK(s.interval_before(1) == 8000);
  CHECK(s.interval_before(2) == 4000);
  CHECK(s.interval_before(4) == 8000);
  CHECK(ledger::IntervalSchedule().on_demand());
  CHECK_FALSE(ledger::IntervalSchedule::fixed(4000).on_demand());
  CHECK_THROWS(ledger::IntervalSchedule(std::vector<std::uint64_t>{}));
}
