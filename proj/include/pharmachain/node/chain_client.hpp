#pragma once

#include "pharmachain/node/service.hpp"
#include "pharmachain/oracle/oracle_node.hpp"

namespace pharmachain::node {

// Oracle-node view of a node API: pending requests in, signed fulfillments out.
class ApiChainClient : public oracle::OracleChainClient {
 public:
  explicit ApiChainClient(Transport& transport) : transport_(transport) {}

  std::vector<oracle::PendingRequest> pending() override;
  // Submits without waiting for the block; a rejected submission throws.
  void fulfill(const KeyPair& key, const Hash256& id, std::int64_t value, bool ok) override;

 private:
  Transport& transport_;
};

}  // namespace pharmachain::node
