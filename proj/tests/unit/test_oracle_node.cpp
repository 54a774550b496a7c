#include <map>

#include "doctest.h"

#include "../support/node_fixture.hpp"
#include "pharmachain/gateway/gateway.hpp"
#include "pharmachain/gateway/http.hpp"
#include "pharmachain/node/chain_client.hpp"
#include "pharmachain/oracle/oracle_node.hpp"

using namespace pharmachain;
using oracle::FetchStatus;
using oracle::Field;
using nlohmann::json;

namespace {
telemetry::TelemetryReading reading(double temp, std::string sku = "SKU-1") {
  telemetry::TelemetryReading r;
  r.timestamp = 1000;
  r.lat = 52.520008;
  r.lng = -13.404954;
  r.sku = std::move(sku);
  r.lot = "L1";
  r.drug_name = "Insulin";
  r.temp = temp;
  r.hum = 41.25;
  return r;
}

struct Fulfilment {
  Hash256 id;
  std::int64_t value;
  bool ok;
};

struct FakeChain : oracle::OracleChainClient {
  std::vector<oracle::PendingRequest> open;
  std::vector<Fulfilment> sent;
  bool reject = false;
  std::vector<oracle::PendingRequest> pending() override { return open; }
  void fulfill(const KeyPair&, const Hash256& id, std::int64_t value, bool ok) override {
    if (reject) throw std::runtime_error("rejected");
    sent.push_back({id, value, ok});
  }
};

struct FakeSource : oracle::DataSource {
  std::map<std::string, oracle::FetchResult> by_sku;
  bool down = false;
  int calls = 0;
  oracle::FetchResult fetch(const std::string& sku) override {
    ++calls;
    if (down) return {FetchStatus::Unreachable, std::nullopt};
    auto it = by_sku.find(sku);
    if (it == by_sku.end()) return {FetchStatus::NotFound, std::nullopt};
    return it->second;
  }
};

oracle::PendingRequest req(std::uint8_t n, Field f, std::string sku = "SKU-1") {
  Hash256 id;
  id.data[0] = n;
  return {id, std::move(sku), f, "job", {}};
}
}  // namespace

TEST_CASE("oracle node scales each channel and answers once") {
  FakeChain chain;
  FakeSource source;
  source.by_sku["SKU-1"] = {FetchStatus::Ok, reading(23.5)};
  chain.open = {req(1, Field::Temperature), req(2, Field::Humidity), req(3, Field::Latitude),
                req(4, Field::Longitude)};
  oracle::OracleNode node(KeyPair::from_label("oracle-0"), chain, source);
  auto s = node.poll_once();
  CHECK(s.fulfilled == 4);
  CHECK(source.calls == 1);  // one fetch per sku per poll
  REQUIRE(chain.sent.size() == 4);
  CHECK(chain.sent[0].value == 2350);
  CHECK(chain.sent[1].value == 4125);
  CHECK(chain.sent[2].value == 52520008);
  CHECK(chain.sent[3].value == -13404954);
  for (const auto& f : chain.sent) CHECK(f.ok);

  // still listed as pending (quorum not met yet): not answered again
  CHECK(node.poll_once().fulfilled == 0);
  CHECK(chain.sent.size() == 4);

  // a request already carrying this node's response is skipped too
  auto mine = req(5, Field::Temperature);
  mine.responders.push_back(node.address());
  chain.open = {mine};
  CHECK(node.poll_once().fulfilled == 0);
}

TEST_CASE("oracle node failure paths") {
  FakeChain chain;
  FakeSource source;
  oracle::OracleNode node(KeyPair::from_label("oracle-0"), chain, source);

  SUBCASE("unknown sku is answered with ok = false") {
    chain.open = {req(1, Field::Temperature, "SKU-404")};
    auto s = node.poll_once();
    CHECK(s.failed == 1);
    REQUIRE(chain.sent.size() == 1);
    CHECK_FALSE(chain.sent[0].ok);
  }
  SUBCASE("negative temperature cannot be encoded unsigned") {
    source.by_sku["SKU-1"] = {FetchStatus::Ok, reading(-18)};
    chain.open = {req(1, Field::Temperature), req(2, Field::Latitude)};
    auto s = node.poll_once();
    CHECK(s.failed == 1);
    CHECK(s.fulfilled == 1);
    CHECK_FALSE(chain.sent[0].ok);
    CHECK(chain.sent[1].ok);
  }
  SUBCASE("unreachable gateway defers and retries") {
    source.down = true;
    source.by_sku["SKU-1"] = {FetchStatus::Ok, reading(5)};
    chain.open = {req(1, Field::Temperature)};
    CHECK(node.poll_once().deferred == 1);
    CHECK(chain.sent.empty());
    source.down = false;
    CHECK(node.poll_once().fulfilled == 1);
    CHECK(chain.sent.at(0).value == 500);
  }
  SUBCASE("rejected submission is retried on the next poll") {
    source.by_sku["SKU-1"] = {FetchStatus::Ok, reading(5)};
    chain.open = {req(1, Field::Temperature)};
    chain.reject = true;
    CHECK(node.poll_once().errors == 1);
    chain.reject = false;
    CHECK(node.poll_once().fulfilled == 1);
  }
}

TEST_CASE("oracle round trip through the node API and the gateway") {
  fixture::Net net;
  gateway::MemorySink sink;
  gateway::GatewayOptions go;
  gateway::Gateway gw(go, sink);
  auto sensor = KeyPair::from_label("sensor-0");
  gw.register_node("sensor-0", sensor.public_key());
  REQUIRE(gw.consume(telemetry::sign_reading(reading(23.5), "sensor-0", sensor).serialize()) ==
          gateway::ConsumeStatus::Accepted);

  node::ApiChainClient chain(*net.api);
  oracle::GatewayDataSource source(gw);
  oracle::OracleNode oracle_node(KeyPair::from_label("oracle-0"), chain, source);

  auto link_before = net.api->call("GET", "/status").body["contract_link"]["tokens"];
  auto r = net.tx("manufacturer", "requestTemperatureData", {{"sku", "SKU-1"}});
  REQUIRE(r.status == 200);
  auto id = r.body["receipt"]["result"].get<std::string>();
  CHECK(chain.pending().size() == 1);

  int polls = 0;
  json got;
  while (polls < 2) {
    ++polls;
    oracle_node.poll_once();
    net.clock.advance(1000);
    net.node->produce();
    got = net.api->call("GET", "/oracle/requests/" + id).body;
    if (got["status"] == "fulfilled") break;
  }
  CHECK(polls <= 2);
  CHECK(got["status"] == "fulfilled");
  CHECK(got["result"] == 2350);
  CHECK(got["value"] == 23.5);
  CHECK(chain.pending().empty());
  CHECK(link_before == "1000");
  CHECK(net.api->call("GET", "/status").body["contract_link"]["tokens"] == "999.9");
  auto oracle_addr = KeyPair::from_label("oracle-0").address().str();
  CHECK(net.api->call("GET", "/link/" + oracle_addr).body["tokens"] == "0.1");
}

TEST_CASE("http data source maps gateway answers") {
  gateway::MemorySink sink;
  gateway::Gateway gw({}, sink);
  auto sensor = KeyPair::from_label("sensor-0");
  gw.register_node("sensor-0", sensor.public_key());
  gw.consume(telemetry::sign_reading(reading(7.25), "sensor-0", sensor).serialize());
  gateway::GatewayServer server(gw);
  server.start();
  gateway::HttpDataSource src(server.url());
  auto ok = src.fetch("SKU-1");
  REQUIRE(ok.status == FetchStatus::Ok);
  CHECK(*ok.reading == reading(7.25));
  CHECK(src.fetch("SKU-2").status == FetchStatus::NotFound);
  CHECK(src.fetch("bad sku/x").status == FetchStatus::NotFound);
  auto url = server.url();
  server.stop();
  gateway::HttpDataSource dead(url, std::chrono::milliseconds(500));
  CHECK(dead.fetch("SKU-1").status == FetchStatus::Unreachable);
}
