#include <numeric>
#include <sstream>

#include "doctest.h"

#include "pharmachain/gateway/gateway.hpp"
#include "pharmachain/gateway/http.hpp"
#include "pharmachain/node/blocktimes.hpp"
#include "pharmachain/node/demo.hpp"

using namespace pharmachain;

namespace {
struct LiveGateway {
  gateway::MemorySink sink;
  gateway::Gateway gw{{}, sink};
  gateway::GatewayServer server{gw};
  LiveGateway() {
    auto key = KeyPair::from_label("sensor-0");
    gw.register_node("sensor-0", key.public_key());
    telemetry::TelemetryReading r;
    r.timestamp = 1;
    r.sku = "SKU-1";
    r.lot = "L";
    r.drug_name = "D";
    r.temp = 5;
    r.hum = 40;
    gw.consume(telemetry::sign_reading(r, "sensor-0", key).serialize());
    server.start();
  }
};
}  // namespace

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v(20);
  std::iota(v.begin(), v.end(), 1.0);
  std::reverse(v.begin(), v.end());
  CHECK(gateway::percentile(v, 95) == 19);
  CHECK(gateway::percentile(v, 100) == 20);
  CHECK(gateway::percentile(v, 50) == 10);
  CHECK(gateway::percentile(v, 0) == 1);
  std::vector<double> h(100);
  std::iota(h.begin(), h.end(), 1.0);
  CHECK(gateway::percentile(h, 95) == 95);
  CHECK(gateway::percentile({7}, 95) == 7);
  CHECK(gateway::percentile({}, 95) == 0);
}

TEST_CASE("load test reports consistent statistics") {
  LiveGateway live;
  gateway::LoadTestOptions o;
  o.url = live.server.url();
  o.requests = 50;
  o.duration_s = 0.25;
  o.threads = 8;
  auto r = gateway::run_load_test(o);
  CHECK(r.requests_sent == 50);
  CHECK(r.failed_requests == 0);
  CHECK(r.error_pct == 0);
  REQUIRE(r.latencies_ms.size() == 50);
  auto [lo, hi] = std::minmax_element(r.latencies_ms.begin(), r.latencies_ms.end());
  CHECK(r.min_ms == doctest::Approx(*lo));
  CHECK(r.max_ms == doctest::Approx(*hi));
  CHECK(r.avg_ms ==
        doctest::Approx(std::accumulate(r.latencies_ms.begin(), r.latencies_ms.end(), 0.0) / 50.0));
  CHECK(r.p95_ms == gateway::percentile(r.latencies_ms, 95));
  CHECK(r.load_duration_s >= 0.2);  // the last send is scheduled 49/50 of the way through
  CHECK(r.throughput_rps == doctest::Approx(50.0 / r.load_duration_s));
  auto j = r.to_json();
  for (auto key : {"requests_sent", "load_duration_s", "failed_requests", "error_pct", "avg_ms", "min_ms", "max_ms",
                   "p95_ms", "throughput_rps"})
    CHECK(j.contains(key));
}

TEST_CASE("single request throughput is the inverse of its latency") {
  LiveGateway live;
  gateway::LoadTestOptions o;
  o.url = live.server.url();
  o.requests = 1;
  o.threads = 1;
  auto r = gateway::run_load_test(o);
  REQUIRE(r.failed_requests == 0);
  CHECK(r.throughput_rps == doctest::Approx(1000.0 / r.avg_ms).epsilon(0.05));
}

TEST_CASE("load test refuses a target that cannot answer") {
  LiveGateway live;
  gateway::LoadTestOptions o;
  o.url = live.server.url();
  o.requests = 5;
  o.sku = "SKU-unknown";
  CHECK_THROWS_AS(gateway::run_load_test(o), gateway::TargetUnavailable);
  live.server.stop();
  o.sku = "SKU-1";
  o.timeout = std::chrono::milliseconds(500);
  CHECK_THROWS_AS(gateway::run_load_test(o), gateway::TargetUnavailable);
  o.requests = 0;
  CHECK_THROWS_AS(gateway::run_load_test(o), std::invalid_argument);
}

TEST_CASE("simulated block times follow the reference schedule") {
  auto rep = node::simulate_block_times();
  REQUIRE(rep.rows.size() == 18);
  // reference intervals (s) and LINK fees, deployment first
  const double intervals[] = {8, 4, 4, 8, 4, 4, 8, 4, 4, 8, 4, 8, 4, 4, 4, 8, 4, 4};
  const char* fees[] = {"0",   "0",   "0",   "0",   "0",   "0.5", "0.5", "0.4", "0.4",
                        "0.4", "0.4", "0.4", "0.4", "0.4", "0.4", "0.4", "0.4", "0.4"};
  double total = 0;
  for (std::size_t i = 0; i < 18; ++i) {
    CAPTURE(i);
    CHECK(rep.rows[i].interval_s == intervals[i]);
    CHECK(rep.rows[i].link_fee == fees[i]);
    CHECK(rep.rows[i].success);
    total += intervals[i];
  }
  CHECK(total == 96);
  CHECK(rep.total_s == total);
  CHECK(rep.mean_s == doctest::Approx(total / 18));
  CHECK(rep.reported_mean_s == doctest::Approx(5.6));
  CHECK(rep.intervals_match);
  CHECK(rep.fees_match);
}

TEST_CASE("demo drives one item through every state") {
  std::ostringstream out;
  node::DemoOptions o;
  auto r = node::run_demo(o, out);
  REQUIRE(r.events.size() == 13);
  const char* names[] = {"ProducedByManufacturer", "UpdateInventoryByManufacturer", "PurchasedByDistributor",
                         "ShippedByManufacturer", "ReceivedByDistributor", "ProcessedByDistributor",
                         "PackagedByDistributor", "ForSaleByDistributor", "PurchasedByRetailer",
                         "ShippedByDistributor", "ReceivedByRetailer", "ForSaleByRetailer", "PurchasedByConsumer"};
  for (std::size_t i = 0; i < 13; ++i) {
    CHECK(r.events[i].name == names[i]);
    CHECK(r.events[i].upc == o.upc);
  }
  CHECK(r.final_state == 12);
  CHECK(r.authentic);
  CHECK(r.oracle_fulfilled == 52);
  CHECK(r.readings_published >= 13);
  CHECK(r.audit_rows == 0);  // the default profile stays cold
  CHECK(out.str().find("event 13 PurchasedByConsumer upc=1001") != std::string::npos);
}
