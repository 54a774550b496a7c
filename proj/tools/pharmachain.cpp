// Command-line client and process launcher for a PharmaChain network.
//
// Exit codes: 0 success, 1 the request or operation failed, 2 usage error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pharmachain/crypto.hpp"
#include "pharmachain/gateway/http.hpp"
#include "pharmachain/node/blocktimes.hpp"
#include "pharmachain/node/chain_client.hpp"
#include "pharmachain/node/demo.hpp"
#include "pharmachain/node/http.hpp"
#include "pharmachain/node/node.hpp"
#include "pharmachain/node/service.hpp"
#include "pharmachain/reference_costs.hpp"
#include "pharmachain/telemetry/broker.hpp"
#include "pharmachain/telemetry/sensing_node.hpp"

using namespace pharmachain;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

void wait_for_signal() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config = "network/config.json";
  std::string node_url;
  std::string account;
  bool compact = false;
};

// A node API: remote when --node-url is given, otherwise the chain in the config's
// data directory opened in this process.
struct Session {
  std::unique_ptr<node::Node> node;
  std::unique_ptr<node::Service> service;
  std::unique_ptr<node::Transport> transport;

  node::Transport& api() { return *transport; }
};

Session open_session(const Globals& g) {
  Session s;
  if (!g.node_url.empty()) {
    s.transport = std::make_unique<node::HttpTransport>(g.node_url);
    return s;
  }
  auto cfg = node::NodeConfig::load(g.config);
  auto keys = node::Keystore::load(cfg.resolve(cfg.keystore));
  s.node = std::make_unique<node::Node>(cfg, keys);
  if (!cfg.schedule().on_demand()) s.node->start();
  s.service = std::make_unique<node::Service>(*s.node);
  s.transport = std::make_unique<node::LocalTransport>(*s.service);
  return s;
}

int emit(const Globals& g, const node::Response& r) {
  bool ok = r.status >= 200 && r.status < 300;
  (ok ? std::cout : std::cerr) << r.body.dump(g.compact ? -1 : 2) << '\n';
  return ok ? 0 : 1;
}

std::string need_account(const Globals& g) {
  if (g.account.empty()) throw UsageError("this command signs a transaction: pass --account <name>");
  return g.account;
}

int submit(const Globals& g, const std::string& op, const json& args) {
  auto s = open_session(g);
  return emit(g, s.api().call("POST", "/tx/" + op, {{"account", need_account(g)}, {"args", args}}));
}

std::string role_title_of(const std::string& name) {
  auto r = access::parse_role(name);
  if (!r) throw UsageError("unknown role '" + name + "' (manufacturer, distributor, retailer, consumer)");
  return std::string(access::role_title(*r));
}

std::pair<std::string, std::uint16_t> host_port(const std::string& s, std::uint16_t default_port) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos) return {s, default_port};
  return {s.substr(0, colon), static_cast<std::uint16_t>(std::stoi(s.substr(colon + 1)))};
}

}  // namespace

int main(int argc, char** argv) {
  crypto_init();
  CLI::App app{"PharmaChain: permissioned pharmaceutical supply-chain ledger"};
  app.require_subcommand(1);
  // global options may follow the subcommand
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "network config file")->capture_default_str();
  app.add_option("--node-url", g.node_url, "talk to a running node, e.g. http://127.0.0.1:8545");
  app.add_option("--account", g.account, "keystore account that signs transactions");
  app.add_flag("--compact", g.compact, "single-line JSON output");

  std::function<int()> action;

  // init
  auto* init = app.add_subcommand("init", "create keystore, config and genesis for a new network");
  std::string init_dir = "network";
  std::uint64_t init_interval = 4000;
  bool init_deterministic = false;
  init->add_option("dir", init_dir, "network directory")->capture_default_str();
  init->add_option("--block-interval-ms", init_interval, "block interval; 0 mines a block per transaction")
      ->capture_default_str();
  init->add_flag("--deterministic", init_deterministic, "derive keys from account names (testing only)");
  init->callback([&] {
    action = [&] {
      node::NodeConfig cfg;
      cfg.block_intervals_ms = {init_interval};
      cfg = node::init_network(init_dir, cfg, init_deterministic);
      auto keys = node::Keystore::load(cfg.resolve(cfg.keystore));
      node::Node n(cfg, keys);
      if (!cfg.schedule().on_demand()) n.start();
      auto enrolled = node::enrol_default_roles(n);
      json accounts = json::array();
      for (const auto& a : keys.accounts()) accounts.push_back({{"name", a.name}, {"address", a.address().str()}});
      std::cout << json{{"config", (std::filesystem::path(init_dir) / "config.json").string()},
                        {"height", n.ledger().tip_height()},
                        {"roles_enrolled", enrolled.size()},
                        {"accounts", accounts}}
                       .dump(g.compact ? -1 : 2)
                << '\n';
      return 0;
    };
  });

  // keys
  auto* keys = app.add_subcommand("keys", "keystore accounts");
  keys->require_subcommand(1);
  std::string key_name;
  keys->add_subcommand("new", "create an account")->add_option("name", key_name)->required();
  keys->get_subcommand("new")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("POST", "/accounts", {{"name", key_name}}));
    };
  });
  keys->add_subcommand("list", "list accounts and their roles")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/accounts"));
    };
  });

  // roles
  auto* roles = app.add_subcommand("roles", "role membership");
  roles->require_subcommand(1);
  std::string role_name, role_member;
  auto* roles_add = roles->add_subcommand("add", "admit an account to a role (signer must hold it)");
  roles_add->add_option("role", role_name)->required();
  roles_add->add_option("account", role_member, "account name or 0x address")->required();
  roles_add->callback([&] {
    action = [&] { return submit(g, "add" + role_title_of(role_name), {{"account", role_member}}); };
  });
  auto* roles_renounce = roles->add_subcommand("renounce", "give up one of the signer's roles");
  roles_renounce->add_option("role", role_name)->required();
  roles_renounce->callback([&] { action = [&] { return submit(g, "renounce" + role_title_of(role_name), json::object()); }; });
  auto* roles_show = roles->add_subcommand("show", "roles of an account, or all members");
  roles_show->add_option("account", role_member);
  roles_show->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", role_member.empty() ? "/roles" : "/roles/" + role_member));
    };
  });

  // one subcommand per contract operation
  std::map<std::string, std::map<std::string, std::string>> op_args;
  for (const auto& op : supply::operation_catalog()) {
    auto name = std::string(op.name);
    auto* sub = app.add_subcommand(name, "submit " + name)->group("Contract operations");
    for (const auto& p : op.params)
      sub->add_option("--" + std::string(p.name), op_args[name][std::string(p.name)], std::string(supply::param_type_name(p.type)))
          ->required();
    sub->callback([&, name] {
      action = [&, name] {
        json args = json::object();
        for (const auto& [k, v] : op_args[name]) args[k] = v;
        return submit(g, name, args);
      };
    });
  }

  // item
  auto* item = app.add_subcommand("item", "item queries");
  item->require_subcommand(1);
  std::string upc;
  auto* item_fetch = item->add_subcommand("fetch", "item details and history");
  item_fetch->add_option("upc", upc)->required();
  item_fetch->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/items/" + upc));
    };
  });
  auto* item_verify = item->add_subcommand("verify", "check the item's provenance against the chain");
  item_verify->add_option("upc", upc)->required();
  item_verify->callback([&] {
    action = [&] {
      auto s = open_session(g);
      auto r = s.api().call("GET", "/items/" + upc + "/provenance");
      if (r.status != 200) return emit(g, r);
      std::cout << r.body.dump(g.compact ? -1 : 2) << '\n';
      if (r.body["authentic"].get<bool>()) return 0;
      std::cerr << "counterfeit-risk";
      if (!r.body["failing_height"].is_null()) std::cerr << ": chain fails at height " << r.body["failing_height"];
      std::cerr << '\n';
      return 1;
    };
  });
  item->add_subcommand("list", "all items")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/items"));
    };
  });

  // chain
  auto* chain = app.add_subcommand("chain", "chain queries");
  chain->require_subcommand(1);
  chain->add_subcommand("verify", "re-check every block")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      auto r = s.api().call("GET", "/chain/verify");
      int rc = emit(g, r);
      if (rc == 0 && !r.body["ok"].get<bool>()) {
        std::cerr << "chain verification failed at height " << r.body["first_bad_height"] << ": "
                  << r.body["reason"].get<std::string>() << '\n';
        return 1;
      }
      return rc;
    };
  });
  chain->add_subcommand("status", "tip, validators, LINK balance")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/status"));
    };
  });
  std::string height = "latest";
  chain->add_subcommand("block", "one block")->add_option("height", height);
  chain->get_subcommand("block")->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/blocks/" + height));
    };
  });

  // events
  auto* events = app.add_subcommand("events", "emitted lifecycle events");
  std::string events_upc;
  events->add_option("--upc", events_upc);
  events->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", events_upc.empty() ? "/events" : "/events?upc=" + events_upc));
    };
  });

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "oracle requests and the oracle node");
  oracle_cmd->require_subcommand(1);
  std::string req_status, req_id;
  auto* oracle_requests = oracle_cmd->add_subcommand("requests", "list requests");
  oracle_requests->add_option("--status", req_status, "pending, fulfilled, failed or expired");
  oracle_requests->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", req_status.empty() ? "/oracle/requests" : "/oracle/requests?status=" + req_status));
    };
  });
  auto* oracle_request = oracle_cmd->add_subcommand("request", "one request");
  oracle_request->add_option("id", req_id)->required();
  oracle_request->callback([&] {
    action = [&] {
      auto s = open_session(g);
      return emit(g, s.api().call("GET", "/oracle/requests/" + req_id));
    };
  });
  auto* oracle_serve = oracle_cmd->add_subcommand("serve", "run an oracle node against a node API and a gateway");
  std::string gateway_url;
  std::uint64_t poll_ms = 0;
  oracle_serve->add_option("--gateway-url", gateway_url);
  oracle_serve->add_option("--poll-ms", poll_ms);
  oracle_serve->callback([&] {
    action = [&] {
      auto cfg = node::NodeConfig::load(g.config);
      auto keystore = node::Keystore::load(cfg.resolve(cfg.keystore));
      auto account = g.account.empty() ? cfg.oracle.nodes.front() : g.account;
      // the oracle runs beside a node, so it talks to the configured API by default
      if (g.node_url.empty()) g.node_url = cfg.node_url();
      auto s = open_session(g);
      node::ApiChainClient client(s.api());
      gateway::HttpDataSource source(gateway_url.empty() ? cfg.oracle.gateway_url : gateway_url);
      oracle::OracleNodeOptions opts;
      opts.poll_interval = std::chrono::milliseconds(poll_ms ? poll_ms : cfg.oracle.poll_interval_ms);
      oracle::OracleNode on(keystore.get(account).key(), client, source, opts);
      std::cerr << "oracle node " << on.address().str() << " polling every " << opts.poll_interval.count() << " ms\n";
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      on.run(g_stop);
      return 0;
    };
  });

  // node
  auto* node_cmd = app.add_subcommand("node", "run the ledger node");
  node_cmd->require_subcommand(1);
  std::string serve_host;
  std::uint16_t serve_port = 0;
  auto* node_serve = node_cmd->add_subcommand("serve", "serve the HTTP API and produce blocks");
  node_serve->add_option("--host", serve_host);
  node_serve->add_option("--port", serve_port);
  node_serve->callback([&] {
    action = [&] {
      auto cfg = node::NodeConfig::load(g.config);
      auto keystore = node::Keystore::load(cfg.resolve(cfg.keystore));
      node::Node n(cfg, keystore);
      n.start();
      node::Service svc(n);
      node::NodeServer server(svc, serve_host.empty() ? cfg.host : serve_host, serve_port ? serve_port : cfg.port);
      server.start();
      std::cerr << "node API on " << server.url() << ", height " << n.ledger().tip_height() << '\n';
      wait_for_signal();
      server.stop();
      n.stop();
      return 0;
    };
  });

  // gateway
  auto* gateway_cmd = app.add_subcommand("gateway", "telemetry gateway");
  gateway_cmd->require_subcommand(1);
  std::string gw_broker;
  bool gw_no_broker = false;
  auto* gateway_serve = gateway_cmd->add_subcommand("serve", "consume telemetry and serve the shipment API");
  gateway_serve->add_option("--host", serve_host);
  gateway_serve->add_option("--port", serve_port);
  gateway_serve->add_option("--broker", gw_broker, "host:port to subscribe to");
  gateway_serve->add_flag("--no-broker", gw_no_broker, "accept telemetry over POST /telemetry only");
  gateway_serve->callback([&] {
    action = [&] {
      auto cfg = node::NodeConfig::load(g.config);
      gateway::GatewayOptions opts;
      if (cfg.gateway.rules_file) opts.rules = gateway::RuleSet::load(cfg.resolve(*cfg.gateway.rules_file));
      opts.recipients = cfg.gateway.recipients;
      opts.data_dir = cfg.resolve(cfg.gateway.data_dir);
      auto outbox = cfg.resolve(cfg.gateway.outbox);
      std::filesystem::create_directories(outbox.parent_path());
      gateway::OutboxSink sink(outbox);
      gateway::Gateway gw(opts, sink);
      auto registry = cfg.resolve(cfg.gateway.nodes_file);
      if (std::filesystem::exists(registry))
        for (const auto& [id, key] : gateway::load_node_registry(registry)) gw.register_node(id, key);
      gateway::GatewayServer server(gw, serve_host.empty() ? cfg.gateway.host : serve_host,
                                    serve_port ? serve_port : cfg.gateway.port);
      server.start();
      std::cerr << "gateway on " << server.url() << '\n';
      std::unique_ptr<telemetry::Subscription> sub;
      auto [bhost, bport] = host_port(gw_broker.empty() ? cfg.broker.host : gw_broker, cfg.broker.port);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_stop) {
        if (!gw_no_broker && !sub) {
          try {
            sub = std::make_unique<telemetry::Subscription>(bhost, bport, cfg.broker.topic,
                                                            [&](const std::string& m) { gw.consume(m); });
            std::cerr << "subscribed to " << cfg.broker.topic << " on " << bhost << ':' << bport << '\n';
          } catch (const std::exception& e) {
            std::this_thread::sleep_for(std::chrono::seconds(1));
            continue;
          }
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      if (sub) sub->stop();
      server.stop();
      return 0;
    };
  });

  // broker
  auto* broker_cmd = app.add_subcommand("broker", "telemetry message broker");
  broker_cmd->require_subcommand(1);
  auto* broker_serve = broker_cmd->add_subcommand("serve", "run the publish/subscribe broker");
  broker_serve->add_option("--host", serve_host);
  broker_serve->add_option("--port", serve_port);
  broker_serve->callback([&] {
    action = [&] {
      std::string host = "127.0.0.1";
      std::uint16_t port = 1883;
      if (std::filesystem::exists(g.config)) {
        auto cfg = node::NodeConfig::load(g.config);
        host = cfg.broker.host;
        port = cfg.broker.port;
      }
      telemetry::Broker b(serve_port ? serve_port : port, serve_host.empty() ? host : serve_host);
      b.start();
      std::cerr << "broker on port " << b.port() << '\n';
      wait_for_signal();
      b.stop();
      return 0;
    };
  });

  // sensor
  auto* sensor_cmd = app.add_subcommand("sensor", "simulated sensing node");
  sensor_cmd->require_subcommand(1);
  std::string scenario_file, sensor_id = "sensor-0", sensor_target;
  std::uint64_t sensor_interval = 60, sensor_duration = 0, sensor_seed = 0;
  std::size_t sensor_count = 0;
  double sensor_jitter = 0;
  bool sensor_realtime = false;
  auto* sensor_run = sensor_cmd->add_subcommand("run", "sample a scenario and publish signed readings");
  sensor_run->add_option("--scenario", scenario_file)->required();
  sensor_run->add_option("--node-id", sensor_id)->capture_default_str();
  sensor_run->add_option("--interval", sensor_interval, "seconds between readings")->capture_default_str();
  sensor_run->add_option("--duration", sensor_duration, "scenario seconds to cover (simulated mode)");
  sensor_run->add_option("--count", sensor_count, "readings to send in real-time mode; 0 runs until stopped");
  sensor_run->add_flag("--realtime", sensor_realtime, "one reading per interval of wall time");
  sensor_run->add_option("--seed", sensor_seed);
  sensor_run->add_option("--jitter", sensor_jitter, "Gaussian noise sigma on temp and hum");
  sensor_run->add_option("--to", sensor_target, "broker host:port, or a gateway http:// URL");
  sensor_run->callback([&] {
    action = [&] {
      auto cfg = node::NodeConfig::load(g.config);
      auto keystore = node::Keystore::load(cfg.resolve(cfg.keystore));
      auto account = g.account.empty() ? sensor_id : g.account;
      std::unique_ptr<telemetry::Publisher> pub;
      if (sensor_target.starts_with("http")) {
        pub = std::make_unique<gateway::HttpPublisher>(sensor_target);
      } else {
        auto [h, p] = host_port(sensor_target.empty() ? cfg.broker.host : sensor_target, cfg.broker.port);
        pub = std::make_unique<telemetry::BrokerClient>(h, p);
      }
      telemetry::SensingNodeOptions opts;
      opts.node_id = sensor_id;
      opts.interval_s = sensor_interval;
      opts.seed = sensor_seed;
      opts.jitter_sigma = sensor_jitter;
      opts.topic = cfg.broker.topic;
      telemetry::SensingNode sn(telemetry::Scenario::load(scenario_file), keystore.get(account).key(), opts, *pub);
      if (sensor_realtime) {
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        sn.run_realtime(sensor_count, g_stop);
      } else {
        sn.run(sensor_duration);
      }
      std::cout << json{{"published", sn.published()}, {"queued", sn.queued()}, {"dropped", sn.dropped()}}.dump()
                << '\n';
      return sn.queued() == 0 ? 0 : 1;
    };
  });

  // demo
  auto* demo = app.add_subcommand("demo", "end-to-end demonstration");
  demo->require_subcommand(1);
  std::uint64_t demo_upc = 1001, demo_interval = 0;
  std::string demo_dir;
  auto* demo_run = demo->add_subcommand("run", "take one item through all thirteen states with telemetry running");
  demo_run->add_option("--upc", demo_upc)->capture_default_str();
  demo_run->add_option("--scenario", scenario_file);
  demo_run->add_option("--block-interval-ms", demo_interval, "0 mines a block per transaction")->capture_default_str();
  demo_run->add_option("--data-dir", demo_dir, "keep the chain here instead of in memory");
  demo_run->callback([&] {
    action = [&] {
      node::DemoOptions o;
      o.upc = demo_upc;
      o.block_interval_ms = demo_interval;
      if (!scenario_file.empty()) o.scenario = telemetry::Scenario::load(scenario_file);
      if (!demo_dir.empty()) o.data_dir = demo_dir;
      auto r = node::run_demo(o, std::cout);
      return r.final_state == 12 && r.authentic && r.events.size() == 13 ? 0 : 1;
    };
  });

  // loadtest
  auto* loadtest = app.add_subcommand("loadtest", "GET load against a gateway's shipment API");
  gateway::LoadTestOptions lt;
  std::string lt_out;
  bool lt_local = false;
  loadtest->add_option("--url", lt.url)->capture_default_str();
  loadtest->add_option("--sku", lt.sku)->capture_default_str();
  loadtest->add_option("--requests", lt.requests)->capture_default_str();
  loadtest->add_option("--duration", lt.duration_s, "seconds")->capture_default_str();
  loadtest->add_option("--threads", lt.threads)->capture_default_str();
  loadtest->add_option("--out", lt_out, "write the JSON report here");
  loadtest->add_flag("--local", lt_local, "start a gateway in this process, seeded with one reading");
  loadtest->callback([&] {
    action = [&] {
      gateway::MemorySink sink;
      std::unique_ptr<gateway::Gateway> gw;
      std::unique_ptr<gateway::GatewayServer> server;
      if (lt_local) {
        gw = std::make_unique<gateway::Gateway>(gateway::GatewayOptions{}, sink);
        auto key = KeyPair::from_label("loadtest-sensor");
        gw->register_node("sensor-0", key.public_key());
        auto sc = node::default_scenario();
        sc.sku = lt.sku;
        telemetry::DirectPublisher pub([&](const std::string& m) { gw->consume(m); });
        telemetry::SensingNode sn(sc, key, {}, pub);
        sn.tick();
        server = std::make_unique<gateway::GatewayServer>(*gw);
        server->start();
        lt.url = server->url();
      }
      auto report = gateway::run_load_test(lt);
      auto j = report.to_json();
      j["reference"] = {{"requests_sent", reference::kLoadTestRequests},
                        {"load_duration_s", reference::kLoadTestDurationS},
                        {"failed_requests", 0},
                        {"error_pct", 0},
                        {"avg_ms", reference::kLoadTestAverageMs},
                        {"min_ms", reference::kLoadTestMinMs},
                        {"max_ms", reference::kLoadTestMaxMs},
                        {"throughput_rps", reference::kLoadTestThroughputRps}};
      if (!lt_out.empty()) std::ofstream(lt_out) << j.dump(2) << '\n';
      std::cout << j.dump(g.compact ? -1 : 2) << '\n';
      return report.failed_requests == 0 ? 0 : 1;
    };
  });

  // blocktimes
  auto* blocktimes = app.add_subcommand("blocktimes", "replay the reference block schedule on a simulated clock");
  bool bt_json = false;
  blocktimes->add_flag("--json", bt_json);
  blocktimes->callback([&] {
    action = [&] {
      auto r = node::simulate_block_times();
      if (bt_json)
        std::cout << r.to_json().dump(g.compact ? -1 : 2) << '\n';
      else
        std::cout << r.to_text();
      return r.intervals_match && r.fees_match ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const UsageError& e) {
    std::cerr << json{{"error", "Usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const telemetry::TelemetryError& e) {
    std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const ledger::LedgerError& e) {
    std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const gateway::TargetUnavailable& e) {
    std::cerr << json{{"error", "TargetUnavailable"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Failed"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
