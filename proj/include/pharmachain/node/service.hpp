#pragma once

// JSON request router for the node. The HTTP server and the in-process CLI
// transport both go through Service::handle, so they cannot drift apart.

#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pharmachain/node/node.hpp"

namespace pharmachain::node {

using Query = std::map<std::string, std::string>;

struct Response {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  explicit Service(Node& node) : node_(node) {}

  Response handle(std::string_view method, std::string_view path, const Query& query, std::string_view body);

 private:
  Response submit(const std::string& operation, const nlohmann::json& body);
  Response submit_raw(const nlohmann::json& body);

  Node& node_;
};

// Anything that can carry a request to a node: HTTP or a local Service.
class Transport {
 public:
  virtual ~Transport() = default;
  // target is a path with an optional "?k=v&..." query.
  virtual Response call(std::string_view method, std::string_view target, const nlohmann::json& body = nullptr) = 0;
};

class LocalTransport : public Transport {
 public:
  explicit LocalTransport(Service& s) : service_(s) {}
  Response call(std::string_view method, std::string_view target, const nlohmann::json& body = nullptr) override;

 private:
  Service& service_;
};

// Splits "a=1&b=x%20y" into decoded pairs.
Query parse_query(std::string_view text);

// JSON shapes shared by the API and the CLI.
nlohmann::json item_json(const supply::ShipmentItem& item);
nlohmann::json event_json(const ledger::EventRecord& e);
nlohmann::json receipt_json(const ledger::Receipt& r);
nlohmann::json request_json(const oracle::OracleRequest& r);
// HTTP status for a failed receipt's error code.
int status_for_error(const std::string& code);

}  // namespace pharmachain::node
