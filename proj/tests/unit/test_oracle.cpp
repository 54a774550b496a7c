#include <functional>
#include "doctest.h"

#include "../support/chain_fixture.hpp"
#include "pharmachain/contract_error.hpp"
#include "pharmachain/oracle/bridge.hpp"

using namespace pharmachain;
using oracle::Field;
using oracle::LinkAmount;

namespace {
std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ContractError& e) {
    return e.code();
  }
  return "";
}

Address node(int i) { return KeyPair::from_label("node-" + std::to_string(i)).address(); }
Hash256 rid(int i) { return sha256("req-" + std::to_string(i)); }

struct Bridge {
  Address contract = KeyPair::from_label("contract").address();
  Address caller = KeyPair::from_label("caller").address();
  oracle::OracleBridge b;
  explicit Bridge(std::uint32_t quorum = 1, int nodes = 1, LinkAmount funds = LinkAmount::tokens(1)) {
    oracle::OracleConfig cfg;
    for (int i = 0; i < nodes; ++i) cfg.nodes.push_back(node(i));
    cfg.quorum = quorum;
    b = oracle::OracleBridge(cfg);
    b.link().mint(contract, funds);
  }
  const oracle::OracleRequest& request(int i, Field f = Field::Temperature, std::uint64_t now = 0) {
    return b.request_data(rid(i), contract, caller, "SKU-1", f, LinkAmount::parse_tokens("0.1"), 1, now);
  }
};
}  // namespace

TEST_CASE("link amounts") {
  CHECK(LinkAmount::parse_tokens("0.5").base_units_string() == "500000000000000000");
  CHECK(LinkAmount::parse_tokens("12").tokens_string() == "12");
  CHECK(LinkAmount::parse_tokens("5.40").tokens_string() == "5.4");
  CHECK(LinkAmount::parse_base_units("1").tokens_string() == "0.000000000000000001");
  CHECK_THROWS(LinkAmount::parse_tokens("0.1234567890123456789"));
  CHECK_THROWS(LinkAmount::parse_tokens("1x"));
  CHECK_THROWS(LinkAmount::tokens(1) - LinkAmount::tokens(2));
  ByteWriter w;
  LinkAmount::parse_tokens("123.456").encode(w);
  ByteReader r(w.bytes());
  CHECK(LinkAmount::decode(r) == LinkAmount::parse_tokens("123.456"));
}

TEST_CASE("fixed-point scaling") {
  CHECK(oracle::scale_reading(Field::Temperature, 23.50) == 2350);
  CHECK(oracle::scale_reading(Field::Humidity, 61.237) == 6124);
  CHECK(oracle::scale_reading(Field::Latitude, -33.8688) == -33868800);
  CHECK(oracle::scale_reading(Field::Longitude, 151.209296) == 151209296);
  CHECK_THROWS_AS(oracle::scale_reading(Field::Temperature, -4.0), std::out_of_range);
  CHECK(oracle::unscale(Field::Temperature, 2350) == doctest::Approx(23.5));
  CHECK(oracle::parse_field("temp") == Field::Temperature);
  CHECK(oracle::parse_field("longitude") == Field::Longitude);
  CHECK_FALSE(oracle::parse_field("pressure").has_value());
}

TEST_CASE("job types follow signedness") {
  oracle::OracleConfig cfg;
  CHECK(cfg.job_for(Field::Temperature) == cfg.unsigned_job_id);
  CHECK(cfg.job_for(Field::Humidity) == cfg.unsigned_job_id);
  CHECK(cfg.job_for(Field::Latitude) == cfg.signed_job_id);
  CHECK(cfg.job_for(Field::Longitude) == cfg.signed_job_id);
}

TEST_CASE("default fee schedule") {
  auto fees = oracle::FeeSchedule::defaults();
  CHECK(fees.action_total("produceItemByManufacturer") == LinkAmount::parse_tokens("0.5"));
  CHECK(fees.action_total("sellItemByManufacturer") == LinkAmount::parse_tokens("0.5"));
  CHECK(fees.action_total("purchaseItemByConsumer") == LinkAmount::parse_tokens("0.4"));
  CHECK(fees.per_action.size() == 13);
  CHECK(fees.action_total("addManufacturer") == LinkAmount{});
}

TEST_CASE("request and fulfil") {
  Bridge t;
  const auto& req = t.request(1);
  CHECK(req.status == oracle::RequestStatus::Pending);
  CHECK(req.callback == "fulfillTemperature");
  CHECK(t.b.link().balance(t.contract) == LinkAmount::parse_tokens("0.9"));
  CHECK(t.b.link().escrow() == LinkAmount::parse_tokens("0.1"));

  t.b.fulfill(rid(1), {node(0), 2350, true}, 5);
  const auto* done = t.b.find(rid(1));
  CHECK(done->status == oracle::RequestStatus::Fulfilled);
  CHECK(*done->result == 2350);
  CHECK(done->delivered_at == 5);
  CHECK(t.b.value("SKU-1", Field::Temperature)->value == 2350);
  CHECK(t.b.link().balance(node(0)) == LinkAmount::parse_tokens("0.1"));
  CHECK(t.b.link().escrow() == LinkAmount{});
  CHECK(t.b.link().total() == LinkAmount::tokens(1));

  CHECK(code_of([&] { t.b.fulfill(rid(1), {node(0), 1, true}, 6); }) == "AlreadyFulfilled");
  CHECK(code_of([&] { t.b.fulfill(rid(9), {node(0), 1, true}, 6); }) == "UnknownRequest");
  t.request(2);
  CHECK(code_of([&] { t.b.fulfill(rid(2), {node(5), 1, true}, 6); }) == "NotOracleNode");
}

TEST_CASE("insufficient balance") {
  Bridge t(1, 1, LinkAmount{});
  CHECK(code_of([&] { t.request(1); }) == "InsufficientLink");
  CHECK(t.b.requests().empty());
}

TEST_CASE("error-flagged fulfilment closes without a value") {
  Bridge t;
  t.request(1);
  t.b.fulfill(rid(1), {node(0), 0, false}, 3);
  CHECK(t.b.find(rid(1))->status == oracle::RequestStatus::Failed);
  CHECK(t.b.value("SKU-1", Field::Temperature) == nullptr);
  CHECK(t.b.link().balance(node(0)) == LinkAmount::parse_tokens("0.1"));
}

TEST_CASE("median aggregation") {
  CHECK(oracle::median_value({2340, 2350, 9999}) == 2350);
  CHECK(oracle::median_value({5}) == 5);
  CHECK(oracle::median_value({4, 1, 3, 2}) == 2);

  Bridge t(3, 3);
  t.request(1);
  t.b.aggregate_fulfill(rid(1), {{node(0), 2340, true}, {node(1), 2350, true}, {node(2), 9999, true}}, 4);
  CHECK(*t.b.find(rid(1))->result == 2350);
  // 0.1 / 3 leaves a remainder of one base unit for the first responder.
  auto share = LinkAmount::parse_tokens("0.1") / 3;
  CHECK(t.b.link().balance(node(0)) == share + LinkAmount::base_units(1));
  CHECK(t.b.link().balance(node(1)) == share);
  CHECK(t.b.link().total() == LinkAmount::tokens(1));
}

TEST_CASE("single node aggregation equals fulfil") {
  Bridge a, b;
  a.request(1);
  b.request(1);
  a.b.aggregate_fulfill(rid(1), {{node(0), 2350, true}}, 2);
  b.b.fulfill(rid(1), {node(0), 2350, true}, 2);
  ledger::KvMap ka, kb;
  a.b.export_to(ka);
  b.b.export_to(kb);
  CHECK(ka == kb);
}

TEST_CASE("quorum and expiry") {
  Bridge t(3, 3);
  t.request(1, Field::Temperature, 1000);
  CHECK(code_of([&] {
          t.b.aggregate_fulfill(rid(1), {{node(0), 1, true}, {node(1), 2, true}}, 2);
        }) == "QuorumNotReached");
  CHECK(code_of([&] {
          t.b.aggregate_fulfill(rid(1), {{node(0), 1, true}, {node(0), 2, true}, {node(1), 3, true}}, 2);
        }) == "DuplicateResponse");

  t.b.submit_response(rid(1), {node(0), 10, true}, 2);
  t.b.submit_response(rid(1), {node(1), 20, true}, 2);
  CHECK(t.b.find(rid(1))->status == oracle::RequestStatus::Pending);
  CHECK(code_of([&] { t.b.submit_response(rid(1), {node(1), 20, true}, 2); }) == "DuplicateResponse");

  CHECK(t.b.expire(1000 + 59'999, 3).empty());
  auto expired = t.b.expire(1000 + 60'000, 3);
  REQUIRE(expired.size() == 1);
  const auto* req = t.b.find(rid(1));
  CHECK(req->status == oracle::RequestStatus::Expired);
  CHECK(req->close_reason == "QuorumNotReached");
  CHECK(t.b.link().balance(t.contract) == LinkAmount::tokens(1));
  CHECK(t.b.link().escrow() == LinkAmount{});
  CHECK(code_of([&] { t.b.submit_response(rid(1), {node(2), 20, true}, 4); }) == "RequestExpired");
}

TEST_CASE("third response reaches quorum") {
  Bridge t(3, 3);
  t.request(1);
  t.b.submit_response(rid(1), {node(0), 10, true}, 2);
  t.b.submit_response(rid(1), {node(1), 30, true}, 2);
  t.b.submit_response(rid(1), {node(2), 20, true}, 3);
  CHECK(*t.b.find(rid(1))->result == 20);
}

TEST_CASE("bridge state round trips through the kv map") {
  Bridge t(1, 2);
  t.request(1);
  t.request(2, Field::Latitude);
  t.b.fulfill(rid(2), {node(1), -33868800, true}, 3);
  ledger::KvMap kv;
  t.b.export_to(kv);
  oracle::OracleBridge back;
  back.import_from(kv);
  ledger::KvMap kv2;
  back.export_to(kv2);
  CHECK(kv == kv2);
  CHECK(back.value("SKU-1", Field::Latitude)->value == -33868800);
}

TEST_CASE("request operations through the contract") {
  fixture::Chain c;
  auto anyone = KeyPair::from_label("anyone");
  auto r = c.call(anyone, "requestHumidityData", {std::string("SKU-7")});
  REQUIRE(r.success);
  auto id = Hash256::from_hex_string(r.result);
  const auto* req = c.contract().oracle().find(id);
  REQUIRE(req);
  CHECK(req->field == Field::Humidity);
  CHECK(req->initiator == anyone.address());
  CHECK(req->requester == c.genesis.contract_account);
  CHECK(req->fee == LinkAmount::parse_tokens("0.1"));

  auto oracle_key = KeyPair::from_label("oracle-0");
  auto f = c.call(oracle_key, "fulfillOracleRequest", {id, std::int64_t{5500}, true});
  CHECK(f.success);
  CHECK(c.contract().oracle().value("SKU-7", Field::Humidity)->value == 5500);
  CHECK(c.call(oracle_key, "fulfillOracleRequest", {id, std::int64_t{5500}, true}).error == "AlreadyFulfilled");
  CHECK(c.call(anyone, "fulfillOracleRequest", {id, std::int64_t{1}, true}).error == "NotOracleNode");
}

TEST_CASE("pending requests expire at block time") {
  fixture::Chain c;
  c.step_ms = 30'000;
  auto r = c.call(c.owner, "requestLatitude", {std::string("SKU-1")});
  auto id = Hash256::from_hex_string(r.result);
  c.produce();
  CHECK(c.contract().oracle().find(id)->status == oracle::RequestStatus::Pending);
  c.produce();
  CHECK(c.contract().oracle().find(id)->status == oracle::RequestStatus::Expired);
  CHECK(c.contract().oracle().link().balance(c.genesis.contract_account) == c.genesis.initial_link);
}
