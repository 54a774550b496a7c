#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pharmachain/ledger/ledger.hpp"
#include "pharmachain/supply/contract.hpp"

namespace pharmachain::supply {

struct CustodyLink {
  access::Role role;
  Address party;
  std::uint64_t block_height = 0;
  Hash256 tx_id;
  std::string event;
};

struct ProvenanceReport {
  std::uint64_t upc = 0;
  bool authentic = false;
  ShipmentState state = ShipmentState::ProducedByManufacturer;
  // origin manufacturer, then distributor, retailer and consumer as far as the item got
  std::vector<CustodyLink> custody_chain;
  std::vector<std::string> anomalies;
  std::optional<std::uint64_t> failing_height;
};

// Party that must own an item in state s under the custody rules.
std::optional<Address> expected_owner(const ShipmentItem& item, ShipmentState s);

// Cross-checks an item's recorded history against the chain. Throws ContractError("UnknownUPC").
ProvenanceReport verify_authenticity(const ledger::Ledger& ledger, std::uint64_t upc);
// Same checks against an item already read out of the contract.
ProvenanceReport verify_authenticity(const ledger::Ledger& ledger, const ShipmentItem& item);

}  // namespace pharmachain::supply
