#pragma once

// HTTP face of the gateway and the clients that talk to it.
//
//   GET  /shipments/{sku}                  latest reading (the eight telemetry fields) | 404 SkuNotFound
//   GET  /shipments/{sku}/audit?from=&to=  audit rows, oldest first; from/to are reading timestamps (s)
//   POST /telemetry                        one signed message, as published by a sensing node
//   GET  /stats                            consumption counters
//   GET  /health

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pharmachain/gateway/gateway.hpp"
#include "pharmachain/oracle/oracle_node.hpp"
#include "pharmachain/telemetry/broker.hpp"

namespace httplib {
class Server;
}

namespace pharmachain::gateway {

class GatewayServer {
 public:
  // port 0 picks a free port.
  GatewayServer(Gateway& gateway, std::string host = "127.0.0.1", std::uint16_t port = 0, std::size_t threads = 32);
  ~GatewayServer();

  void start();
  void stop();
  std::uint16_t port() const { return port_; }
  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_); }

 private:
  Gateway& gateway_;
  std::string host_;
  std::uint16_t port_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

class TargetUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadTestOptions {
  std::string url = "http://127.0.0.1:8081";
  std::string sku = "SKU-1";
  std::size_t requests = 1000;
  double duration_s = 2.0;  // sends are spread evenly over this window
  std::size_t threads = 100;
  std::chrono::milliseconds timeout{5000};
};

struct LoadReport {
  std::size_t requests_sent = 0;
  double load_duration_s = 0;  // first send to last response
  std::size_t failed_requests = 0;
  double error_pct = 0;
  double avg_ms = 0;
  double min_ms = 0;
  double max_ms = 0;
  double p95_ms = 0;
  double throughput_rps = 0;  // completed requests / load_duration_s
  std::vector<double> latencies_ms;

  nlohmann::json to_json() const;
};

// GET {url}/shipments/{sku}, `requests` times. Throws TargetUnavailable when the
// gateway does not answer or does not know the sku.
LoadReport run_load_test(const LoadTestOptions& options);

// Nearest-rank percentile of an unsorted sample.
double percentile(std::vector<double> values, double pct);

// Oracle data source over the gateway's HTTP API.
class HttpDataSource : public oracle::DataSource {
 public:
  explicit HttpDataSource(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(5));
  oracle::FetchResult fetch(const std::string& sku) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

// POSTs signed messages to /telemetry; lets a sensing node feed a gateway without the broker.
class HttpPublisher : public telemetry::Publisher {
 public:
  explicit HttpPublisher(std::string url);
  bool publish(const std::string& topic, const std::string& payload) override;

 private:
  std::string url_;
};

}  // namespace pharmachain::gateway
