#include "pharmachain/oracle/oracle_node.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <thread>

#include "pharmachain/gateway/gateway.hpp"

namespace pharmachain::oracle {

FetchResult GatewayDataSource::fetch(const std::string& sku) {
  auto r = gateway_.latest(sku);
  if (!r) return {FetchStatus::NotFound, std::nullopt};
  return {FetchStatus::Ok, r};
}

OracleNode::OracleNode(KeyPair key, OracleChainClient& chain, DataSource& source, OracleNodeOptions options)
    : key_(std::move(key)), chain_(chain), source_(source), options_(options) {}

PollStats OracleNode::poll_once() {
  PollStats stats;
  auto self = key_.address();
  std::map<std::string, FetchResult> fetched;
  for (const auto& req : chain_.pending()) {
    if (submitted_.contains(req.id)) continue;
    if (std::find(req.responders.begin(), req.responders.end(), self) != req.responders.end()) continue;

    auto it = fetched.find(req.sku);
    if (it == fetched.end()) it = fetched.emplace(req.sku, source_.fetch(req.sku)).first;
    const auto& got = it->second;
    if (got.status == FetchStatus::Unreachable) {
      ++stats.deferred;
      continue;
    }

    std::int64_t value = 0;
    bool ok = false;
    if (got.status == FetchStatus::Ok) {
      try {
        value = scale_reading(req.field, got.reading->field(field_reading_key(req.field)));
        ok = true;
      } catch (const std::out_of_range&) {
        // e.g. a negative temperature on the unsigned job
      }
    }
    try {
      chain_.fulfill(key_, req.id, value, ok);
      submitted_.insert(req.id);
      ++(ok ? stats.fulfilled : stats.failed);
    } catch (const std::exception& e) {
      ++stats.errors;
      std::cerr << "oracle: fulfill " << req.id.hex() << " rejected: " << e.what() << '\n';
    }
  }
  return stats;
}

void OracleNode::run(const std::atomic<bool>& stop) {
  while (!stop) {
    try {
      poll_once();
    } catch (const std::exception& e) {
      std::cerr << "oracle: poll failed: " << e.what() << '\n';
    }
    auto until = std::chrono::steady_clock::now() + options_.poll_interval;
    while (!stop && std::chrono::steady_clock::now() < until)
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace pharmachain::oracle
