#include "pharmachain/node/demo.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>

#include "pharmachain/gateway/http.hpp"
#include "pharmachain/node/chain_client.hpp"
#include "pharmachain/node/node.hpp"
#include "pharmachain/node/service.hpp"
#include "pharmachain/supply/provenance.hpp"
#include "pharmachain/telemetry/broker.hpp"
#include "pharmachain/telemetry/sensing_node.hpp"

namespace pharmachain::node {

telemetry::Scenario default_scenario() {
  telemetry::Scenario s;
  s.sku = "SKU-1";
  s.lot = "LOT-2024-001";
  s.drug_name = "Insulin Glargine";
  s.start_timestamp = 1'700'000'000;
  // Karachi -> Lahore, held between 4 and 6 C.
  s.breakpoints = {{0, 24.8607, 67.0011, 4.0, 45.0},
                   {3600, 27.7052, 68.8574, 5.5, 50.0},
                   {7200, 30.1575, 71.5249, 6.0, 48.0},
                   {10800, 31.5204, 74.3587, 4.5, 44.0}};
  return s;
}

DemoResult run_demo(const DemoOptions& o, std::ostream& out) {
  using namespace std::chrono_literals;
  auto scenario = o.scenario.value_or(default_scenario());

  Keystore keys;
  for (const auto& name : {"owner", "manufacturer", "distributor", "retailer", "consumer", "validator-0",
                           "validator-1", "validator-2", "oracle-0", "sensor-0"})
    keys.create_deterministic(name);

  NodeConfig cfg;
  cfg.block_intervals_ms = {o.block_interval_ms};
  if (o.data_dir) {
    cfg.base_dir = *o.data_dir;
    keys.save(cfg.resolve(cfg.keystore));
  }
  Node node(cfg, keys, ledger::system_clock(), o.data_dir.has_value());
  if (o.block_interval_ms > 0) node.start();
  Service service(node);
  LocalTransport transport(service);

  // telemetry path
  gateway::MemorySink sink;
  gateway::GatewayOptions gopts;
  gopts.recipients = cfg.gateway.recipients;
  gateway::Gateway gw(gopts, sink);
  gw.register_node("sensor-0", keys.get("sensor-0").key().public_key());
  gateway::GatewayServer gw_server(gw);
  gw_server.start();

  telemetry::Broker broker;
  broker.start();
  std::mutex mu;
  std::condition_variable cv;
  std::size_t consumed = 0;
  telemetry::Subscription sub("127.0.0.1", broker.port(), telemetry::kDefaultTopic, [&](const std::string& msg) {
    gw.consume(msg);
    std::lock_guard lock(mu);
    ++consumed;
    cv.notify_all();
  });
  telemetry::BrokerClient publisher("127.0.0.1", broker.port());
  telemetry::SensingNodeOptions sopts;
  sopts.interval_s = o.sensor_interval_s;
  telemetry::SensingNode sensor(scenario, keys.get("sensor-0").key(), sopts, publisher);

  ApiChainClient chain(transport);
  gateway::HttpDataSource source(gw_server.url());
  oracle::OracleNode oracle_node(keys.get("oracle-0").key(), chain, source);

  auto sense = [&] {
    sensor.tick();
    std::unique_lock lock(mu);
    cv.wait_for(lock, 5s, [&] { return consumed >= sensor.published(); });
  };

  DemoResult result;
  for (const auto& r : enrol_default_roles(node))
    if (!r.receipt.success) throw std::runtime_error("role enrolment failed: " + r.receipt.error);
  out << "network ready: " << node.ledger().validators().size() << " validators, height "
      << node.ledger().tip_height() << '\n';

  for (const auto& step : supply::kLifecycle) {
    sense();
    ledger::Args args = step.required_state
                            ? ledger::Args{o.upc}
                            : ledger::Args{scenario.sku, scenario.drug_name, o.upc};
    auto r = node.submit(std::string(access::role_name(step.role)), std::string(step.operation), args, 30s);
    if (!r.included || !r.receipt.success)
      throw std::runtime_error(std::string(step.operation) + " failed: " + r.receipt.error + " " + r.receipt.detail);
    for (const auto& e : r.events) {
      result.events.push_back(e);
      out << "event " << result.events.size() << ' ' << e.name << " upc=" << e.upc << " block=" << e.block_height
          << '\n';
    }
    // Answer the oracle requests this action raised; they land in the next block.
    auto polled = oracle_node.poll_once();
    result.oracle_fulfilled += polled.fulfilled;
    if (o.block_interval_ms == 0) {
      if (node.ledger().mempool_size() > 0) node.produce();
    } else {
      auto deadline = std::chrono::steady_clock::now() + 30s;
      while (node.ledger().mempool_size() > 0 && std::chrono::steady_clock::now() < deadline)
        std::this_thread::sleep_for(5ms);
    }
  }

  auto [state, spent] = node.with_contract([&](const supply::SupplyChainContract& c) {
    auto initial = c.genesis().initial_link;
    auto now = c.oracle().link().balance(c.genesis().contract_account);
    return std::pair{static_cast<int>(supply::value_of(c.fetch_item_details(o.upc).state)),
                     (initial - now).tokens_string()};
  });
  result.final_state = state;
  result.link_spent = spent;
  result.authentic = supply::verify_authenticity(node.ledger(), o.upc).authentic;
  result.readings_published = sensor.published();
  result.audit_rows = gw.audit_all().size();

  auto latest = gw.latest(scenario.sku);
  out << "final state " << result.final_state << " ("
      << supply::name_of(*supply::state_from_value(static_cast<unsigned>(result.final_state))) << ")\n";
  out << "authentic " << (result.authentic ? "yes" : "no") << ", chain height " << node.ledger().tip_height()
      << ", verify " << (node.ledger().verify_chain().ok ? "ok" : "FAILED") << '\n';
  out << "telemetry: " << result.readings_published << " readings, " << result.audit_rows << " audit rows";
  if (latest) out << ", latest temp " << latest->temp << " C";
  out << '\n';
  out << "oracle: " << result.oracle_fulfilled << " requests fulfilled, " << result.link_spent << " LINK spent\n";

  sub.stop();
  broker.stop();
  gw_server.stop();
  node.stop();
  return result;
}

}  // namespace pharmachain::node
