#include "pharmachain/node/chain_client.hpp"

#include <stdexcept>

namespace pharmachain::node {

namespace {
[[noreturn]] void fail(const Response& r, const std::string& what) {
  throw std::runtime_error(what + " failed (" + std::to_string(r.status) + "): " + r.body.dump());
}
}  // namespace

std::vector<oracle::PendingRequest> ApiChainClient::pending() {
  auto r = transport_.call("GET", "/oracle/requests?status=pending");
  if (r.status != 200) fail(r, "listing pending oracle requests");
  std::vector<oracle::PendingRequest> out;
  for (const auto& j : r.body) {
    oracle::PendingRequest p;
    p.id = Hash256::from_hex_string(j.at("id").get<std::string>().substr(2));
    p.sku = j.at("sku").get<std::string>();
    auto f = oracle::parse_field(j.at("field").get<std::string>());
    if (!f) continue;
    p.field = *f;
    p.job_id = j.at("job_id").get<std::string>();
    for (const auto& resp : j.at("responses")) p.responders.push_back(Address::parse(resp.at("node").get<std::string>()));
    out.push_back(std::move(p));
  }
  return out;
}

void ApiChainClient::fulfill(const KeyPair& key, const Hash256& id, std::int64_t value, bool ok) {
  auto n = transport_.call("GET", "/accounts/" + key.address().str() + "/nonce");
  if (n.status != 200) fail(n, "reading nonce");
  auto tx = ledger::Transaction::make(key, n.body.at("next").get<std::uint64_t>(), "fulfillOracleRequest",
                                      {id, value, ok});
  auto r = transport_.call("POST", "/tx/raw", {{"tx", to_hex(tx.encode())}, {"wait_ms", 0}});
  if (r.status != 200 && r.status != 202) fail(r, "submitting fulfillment");
}

}  // namespace pharmachain::node
