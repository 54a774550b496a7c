#include <algorithm>
#include <fstream>
#include <set>
#include <thread>

#include "doctest.h"

#include "../support/node_fixture.hpp"
#include "pharmachain/node/config.hpp"
#include "pharmachain/node/http.hpp"
#include "pharmachain/node/keystore.hpp"

using namespace pharmachain;
using fixture::Net;
using fixture::TempDir;
using nlohmann::json;

TEST_CASE("keystore round trip and lookup") {
  TempDir dir;
  node::Keystore ks;
  ks.create("alice");
  ks.create_deterministic("bob");
  CHECK_THROWS_AS(ks.create("alice"), std::invalid_argument);
  CHECK_THROWS_AS(ks.create("0xabc"), std::invalid_argument);
  ks.save(dir.path / "keys.json");
  auto back = node::Keystore::load(dir.path / "keys.json");
  REQUIRE(back.accounts().size() == 2);
  CHECK(back.get("alice").address() == ks.get("alice").address());
  CHECK(back.get(ks.get("bob").address().str()).name == "bob");
  CHECK(back.get("bob").address() == KeyPair::from_label("bob").address());
  CHECK(back.find("carol") == nullptr);
  CHECK_THROWS_AS(back.get("carol"), std::out_of_range);

  // a stored address that does not match the seed is refused
  auto j = json::parse(std::ifstream(dir.path / "keys.json"));
  j["accounts"][0]["address"] = ks.get("bob").address().str();
  std::ofstream(dir.path / "bad.json") << j.dump();
  CHECK_THROWS(node::Keystore::load(dir.path / "bad.json"));
}

TEST_CASE("config defaults, round trip and validation") {
  TempDir dir;
  node::NodeConfig c;
  CHECK(c.block_intervals_ms == std::vector<std::uint64_t>{4000});
  c.block_intervals_ms = {8000, 4000};
  c.oracle.quorum = 1;
  c.save(dir.path / "config.json");
  auto back = node::NodeConfig::load(dir.path / "config.json");
  CHECK(back.block_intervals_ms == c.block_intervals_ms);
  CHECK(back.base_dir == dir.path);
  CHECK(back.resolve("chain") == dir.path / "chain");
  CHECK(back.resolve("/abs") == "/abs");
  CHECK(back.fees.action_total("produceItemByManufacturer") == oracle::LinkAmount::parse_tokens("0.5"));

  auto j = c.to_json();
  j.erase("block_intervals_ms");
  j["block_interval_ms"] = 0;
  CHECK(node::NodeConfig::from_json(j).schedule().on_demand());

  j["fees"] = {{"per_action", {{"sellItemByRetailer", {{"temperature", "0.3"}}}}}};
  auto f = node::NodeConfig::from_json(j).fees;
  CHECK(f.action_total("sellItemByRetailer") == oracle::LinkAmount::parse_tokens("0.3"));
  CHECK(f.action_total("sellItemByDistributor") == oracle::LinkAmount::parse_tokens("0.4"));

  j["oracle"]["quorum"] = 2;  // one node configured
  CHECK_THROWS_AS(node::NodeConfig::from_json(j), std::invalid_argument);
  j["oracle"]["quorum"] = 1;
  j["fees"] = {{"per_action", {{"notAnAction", json::object()}}}};
  CHECK_THROWS_AS(node::NodeConfig::from_json(j), std::invalid_argument);
}

TEST_CASE("mutating endpoint returns the receipt and the event") {
  Net net;
  auto r = net.tx("manufacturer", "produceItemByManufacturer", {{"sku", "SKU-1"}, {"drugName", "Amox"}, {"upc", 42}});
  REQUIRE(r.status == 200);
  CHECK(r.body["status"] == "success");
  REQUIRE(r.body["events"].size() == 1);
  CHECK(r.body["events"][0]["name"] == "ProducedByManufacturer");
  CHECK(r.body["events"][0]["upc"] == 42);
  CHECK(r.body["receipt"]["result"] == "ProducedByManufacturer");

  // positional arguments and decimal strings are accepted as well
  auto p = net.tx("manufacturer", "produceItemByManufacturer", json::array({"SKU-2", "Amox", "43"}));
  CHECK(p.status == 200);

  auto item = net.api->call("GET", "/items/42");
  REQUIRE(item.status == 200);
  CHECK(item.body["state"] == 0);
  CHECK(item.body["stateName"] == "ProducedByManufacturer");
  CHECK(item.body["history"].size() == 1);
  CHECK(item.body["history"][0]["timestamp"].is_number_unsigned());
}

TEST_CASE("error statuses") {
  Net net;
  auto produce = [&](const std::string& who) {
    return net.tx(who, "produceItemByManufacturer", {{"sku", "SKU-1"}, {"drugName", "Amox"}, {"upc", 42}});
  };
  auto denied = produce("consumer");
  CHECK(denied.status == 409);
  CHECK(denied.body["error"] == "GuardFailed");
  CHECK(denied.body["kind"] == "onlyManufacturer");
  CHECK(denied.body["block_height"].is_number());  // failed transactions are still mined

  CHECK(produce("manufacturer").status == 200);
  auto dup = produce("manufacturer");
  CHECK(dup.status == 409);
  CHECK(dup.body["error"] == "DuplicateUPC");

  CHECK(produce("mallory").status == 401);
  CHECK(net.api->call("GET", "/items/999").status == 404);
  CHECK(net.api->call("GET", "/items/999/provenance").status == 404);
  CHECK(net.api->call("GET", "/items/abc").status == 400);
  CHECK(net.tx("distributor", "purchaseItemByDistributor", {{"upc", 999}}).status == 404);
  CHECK(net.tx("manufacturer", "noSuchOperation", json::object()).status == 400);
  CHECK(net.tx("manufacturer", "produceItemByManufacturer", {{"sku", "S"}}).status == 400);
  CHECK(net.tx("manufacturer", "produceItemByManufacturer", {{"sku", 1}, {"drugName", "x"}, {"upc", 1}}).status == 400);
  CHECK(net.tx("manufacturer", "produceItemByManufacturer", {{"sku", "S"}, {"drugName", "x"}, {"upc", -1}}).status ==
        400);
  CHECK(net.service->handle("POST", "/tx/produceItemByManufacturer", {}, "{not json").status == 400);
  CHECK(net.api->call("GET", "/nowhere").status == 404);
  CHECK(net.api->call("GET", "/oracle/requests/0x" + std::string(64, '0')).status == 404);
  CHECK(net.api->call("GET", "/blocks/999").status == 404);

  auto wrong_state = net.tx("distributor", "purchaseItemByDistributor", {{"upc", 42}});
  CHECK(wrong_state.status == 409);
  CHECK(wrong_state.body["kind"] == "updateInventoryByManufacturer");
}

TEST_CASE("every guard kind surfaces as a distinct error body") {
  Net net;
  net.api->call("POST", "/accounts", {{"name", "manufacturer-2"}});
  net.tx("manufacturer", "addManufacturer", {{"account", "manufacturer-2"}});
  net.tx("manufacturer", "produceItemByManufacturer", {{"sku", "S"}, {"drugName", "D"}, {"upc", 1}});
  std::set<std::string> kinds;
  auto kind = [&](const node::Response& r) {
    CHECK(r.status == 409);
    kinds.insert(r.body["kind"].get<std::string>());
    return r.body["kind"].get<std::string>();
  };
  CHECK(kind(net.tx("consumer", "sellItemByManufacturer", {{"upc", 1}})) == "onlyManufacturer");
  CHECK(kind(net.tx("manufacturer", "purchaseItemByDistributor", {{"upc", 1}})) == "onlyDistributor");
  CHECK(kind(net.tx("manufacturer", "purchaseItemByRetailer", {{"upc", 1}})) == "onlyRetailer");
  CHECK(kind(net.tx("manufacturer", "purchaseItemByConsumer", {{"upc", 1}})) == "onlyConsumer");
  CHECK(kind(net.tx("manufacturer-2", "sellItemByManufacturer", {{"upc", 1}})) == "verifyCaller");
  CHECK(kind(net.tx("manufacturer", "shippedItemByManufacturer", {{"upc", 1}})) == "purchasedByDistributor");
  CHECK(kinds.size() == 6);
}

TEST_CASE("accounts, roles and nonces") {
  Net net;
  auto created = net.api->call("POST", "/accounts", {{"name", "auditor"}});
  REQUIRE(created.status == 201);
  CHECK(net.api->call("POST", "/accounts", {{"name", "auditor"}}).status == 409);
  CHECK(net.api->call("POST", "/accounts", json::object()).status == 400);
  auto list = net.api->call("GET", "/accounts");
  CHECK(std::any_of(list.body.begin(), list.body.end(), [](const json& a) { return a["name"] == "auditor"; }));

  auto roles = net.api->call("GET", "/roles/manufacturer");
  CHECK(roles.body["roles"] == json::array({"manufacturer"}));
  CHECK(roles.body["owner"] == false);
  auto owner = net.api->call("GET", "/roles/" + net.node->keystore().get("owner").address().str());
  CHECK(owner.body["owner"] == true);
  CHECK(owner.body["roles"].size() == 4);
  CHECK(net.api->call("GET", "/roles/0xzz").status == 400);

  auto n = net.api->call("GET", "/accounts/owner/nonce");
  CHECK(n.body["confirmed"] == 4);  // four enrolment transactions
  CHECK(n.body["next"] == 5);
}

TEST_CASE("raw signed transactions") {
  Net net;
  auto key = KeyPair::from_label("manufacturer");
  auto tx = ledger::Transaction::make(key, 1, "produceItemByManufacturer",
                                      {std::string("S"), std::string("D"), std::uint64_t{5}});
  auto r = net.api->call("POST", "/tx/raw", {{"tx", to_hex(tx.encode())}});
  CHECK(r.status == 200);
  CHECK(r.body["tx_id"] == "0x" + tx.id().hex());
  CHECK(net.api->call("POST", "/tx/raw", {{"tx", to_hex(tx.encode())}}).status == 400);  // replay: bad nonce
  auto forged = tx;
  forged.args[2] = std::uint64_t{6};
  forged.nonce = 2;
  CHECK(net.api->call("POST", "/tx/raw", {{"tx", to_hex(forged.encode())}}).status == 400);
  CHECK(net.api->call("POST", "/tx/raw", {{"tx", "zz"}}).status == 400);
}

TEST_CASE("queries: events, blocks, verification, oracle requests") {
  Net net;
  net.tx("manufacturer", "produceItemByManufacturer", {{"sku", "SKU-1"}, {"drugName", "D"}, {"upc", 9}});
  net.tx("manufacturer", "sellItemByManufacturer", {{"upc", 9}});
  auto ev = net.api->call("GET", "/events?upc=9");
  REQUIRE(ev.body.size() == 2);
  CHECK(ev.body[0]["name"] == "ProducedByManufacturer");
  CHECK(ev.body[1]["name"] == "UpdateInventoryByManufacturer");
  CHECK(net.api->call("GET", "/events?upc=10").body.empty());

  auto pending = net.api->call("GET", "/oracle/requests?status=Pending");
  CHECK(pending.body.size() == 8);
  auto one = net.api->call("GET", "/oracle/requests/" + pending.body[0]["id"].get<std::string>());
  CHECK(one.status == 200);
  CHECK(one.body["sku"] == "SKU-1");

  auto v = net.api->call("GET", "/chain/verify");
  CHECK(v.body["ok"] == true);
  auto b = net.api->call("GET", "/blocks/latest");
  CHECK(b.body["height"] == net.node->ledger().tip_height());
  CHECK(b.body["transactions"][0]["operation"] == "sellItemByManufacturer");

  auto st = net.api->call("GET", "/status");
  CHECK(st.body["validators"].size() == 3);
  CHECK(st.body["contract_link"]["tokens"] == "999");
  auto prov = net.api->call("GET", "/items/9/provenance");
  CHECK(prov.body["authentic"] == true);
  CHECK(prov.body["verdict"] == "authentic");
  CHECK(prov.body["custody"].size() == 1);
}

TEST_CASE("query string parsing") {
  auto q = node::parse_query("a=1&b=x%20y&c=&d&e=%zz+1");
  CHECK(q["a"] == "1");
  CHECK(q["b"] == "x y");
  CHECK(q["c"].empty());
  CHECK(q.contains("d"));
  CHECK(q["e"] == "%zz 1");
}

TEST_CASE("HTTP and in-process transports have the same chain effects") {
  Net local;
  Net remote;
  node::NodeServer server(*remote.service);
  server.start();
  node::HttpTransport http(server.url());

  auto run = [](node::Transport& t, ledger::ManualClock& clock) {
    std::vector<int> statuses;
    auto step = [&](const std::string& who, const std::string& op, const json& args) {
      clock.advance(1000);
      statuses.push_back(t.call("POST", "/tx/" + op, {{"account", who}, {"args", args}}).status);
    };
    step("manufacturer", "produceItemByManufacturer", {{"sku", "SKU-1"}, {"drugName", "D"}, {"upc", 1}});
    step("consumer", "sellItemByManufacturer", {{"upc", 1}});
    step("manufacturer", "sellItemByManufacturer", {{"upc", 1}});
    step("distributor", "purchaseItemByDistributor", {{"upc", 1}});
    step("manufacturer", "requestTemperatureData", {{"sku", "SKU-1"}});
    return statuses;
  };
  auto a = run(*local.api, local.clock);
  auto b = run(http, remote.clock);
  CHECK(a == b);
  CHECK(a == std::vector<int>{200, 409, 200, 200, 200});
  CHECK(local.node->ledger().state_root() == remote.node->ledger().state_root());
  CHECK(local.node->ledger().raw_records() == remote.node->ledger().raw_records());
  CHECK(http.call("GET", "/items/1").body == local.api->call("GET", "/items/1").body);
  server.stop();

  node::HttpTransport dead(server.url());
  CHECK(dead.call("GET", "/status").status == 0);
}

TEST_CASE("producer thread honours the block interval and the chain survives a restart") {
  fixture::TempDir dir;
  node::NodeConfig cfg;
  cfg.base_dir = dir.path;
  cfg.block_intervals_ms = {100};
  std::uint64_t height = 0;
  Hash256 root;
  {
    node::Node n(cfg, fixture::demo_keys());
    n.start();
    node::enrol_default_roles(n);
    auto r = n.submit("manufacturer", "produceItemByManufacturer",
                      {std::string("S"), std::string("D"), std::uint64_t{1}}, std::chrono::seconds(5));
    REQUIRE(r.included);
    CHECK(r.receipt.success);
    for (std::uint64_t h = 1; h <= n.ledger().tip_height(); ++h)
      CHECK(n.ledger().block(h).timestamp_ms - n.ledger().block(h - 1).timestamp_ms >= 100);
    // the data directory is locked while the node is open
    CHECK_THROWS_AS(node::Node(cfg, fixture::demo_keys()), std::runtime_error);
    n.stop();
    height = n.ledger().tip_height();
    root = n.ledger().state_root();
  }
  node::Node reopened(cfg, fixture::demo_keys());
  CHECK(reopened.ledger().tip_height() == height);
  CHECK(reopened.ledger().state_root() == root);
  CHECK(reopened.with_contract([](const supply::SupplyChainContract& c) { return c.items().size(); }) == 1);
}
