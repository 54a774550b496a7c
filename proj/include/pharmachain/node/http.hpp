#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "pharmachain/node/service.hpp"

namespace httplib {
class Server;
}

namespace pharmachain::node {

// Serves Service over HTTP/JSON on every route it knows.
class NodeServer {
 public:
  NodeServer(Service& service, std::string host = "127.0.0.1", std::uint16_t port = 0, std::size_t threads = 16);
  ~NodeServer();

  void start();
  void stop();
  std::uint16_t port() const { return port_; }
  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_); }

 private:
  Service& service_;
  std::string host_;
  std::uint16_t port_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// Transport to a node's HTTP API. Connection failures come back as status 0.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(60));
  Response call(std::string_view method, std::string_view target, const nlohmann::json& body = nullptr) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace pharmachain::node
