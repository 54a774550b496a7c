#pragma once

// Off-chain half of the oracle: watches pending requests, reads the gateway's
// latest-reading API and writes the scaled value back through fulfillOracleRequest.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/oracle/bridge.hpp"
#include "pharmachain/telemetry/reading.hpp"

namespace pharmachain::gateway {
class Gateway;
}

namespace pharmachain::oracle {

struct PendingRequest {
  Hash256 id;
  std::string sku;
  Field field = Field::Temperature;
  std::string job_id;
  std::vector<Address> responders;
};

// What the node needs from the chain.
class OracleChainClient {
 public:
  virtual ~OracleChainClient() = default;
  virtual std::vector<PendingRequest> pending() = 0;
  // Signs and submits fulfillOracleRequest(id, value, ok). Throws on rejection.
  virtual void fulfill(const KeyPair& key, const Hash256& id, std::int64_t value, bool ok) = 0;
};

enum class FetchStatus { Ok, NotFound, Unreachable };

struct FetchResult {
  FetchStatus status = FetchStatus::Unreachable;
  std::optional<telemetry::TelemetryReading> reading;
};

class DataSource {
 public:
  virtual ~DataSource() = default;
  virtual FetchResult fetch(const std::string& sku) = 0;
};

// Reads a gateway living in the same process.
class GatewayDataSource : public DataSource {
 public:
  explicit GatewayDataSource(const gateway::Gateway& g) : gateway_(g) {}
  FetchResult fetch(const std::string& sku) override;

 private:
  const gateway::Gateway& gateway_;
};

struct PollStats {
  std::size_t fulfilled = 0;  // submitted with ok = true
  std::size_t failed = 0;     // submitted with ok = false (unknown SKU, unrepresentable value)
  std::size_t deferred = 0;   // gateway unreachable; retried next poll
  std::size_t errors = 0;     // submission rejected
};

struct OracleNodeOptions {
  std::chrono::milliseconds poll_interval{1000};
};

class OracleNode {
 public:
  OracleNode(KeyPair key, OracleChainClient& chain, DataSource& source, OracleNodeOptions options = {});

  PollStats poll_once();
  // Polls until stop is set.
  void run(const std::atomic<bool>& stop);

  Address address() const { return key_.address(); }

 private:
  KeyPair key_;
  OracleChainClient& chain_;
  DataSource& source_;
  OracleNodeOptions options_;
  std::set<Hash256> submitted_;
};

}  // namespace pharmachain::oracle
