#include "pharmachain/supply/provenance.hpp"

#include <algorithm>

#include "pharmachain/contract_error.hpp"

namespace pharmachain::supply {

std::optional<Address> expected_owner(const ShipmentItem& item, ShipmentState s) {
  auto v = value_of(s);
  if (v <= 1) return item.origin_manufacturer;
  if (v <= 7) return item.distributor;
  if (v <= 11) return item.retailer;
  return item.consumer;
}

ProvenanceReport verify_authenticity(const ledger::Ledger& ledger, std::uint64_t upc) {
  auto item = ledger.read_state([&](const ledger::StateMachine& sm) {
    const auto* contract = dynamic_cast<const SupplyChainContract*>(&sm);
    if (!contract) throw std::logic_error("ledger does not run the supply-chain contract");
    return contract->fetch_item_details(upc);
  });
  return verify_authenticity(ledger, item);
}

ProvenanceReport verify_authenticity(const ledger::Ledger& ledger, const ShipmentItem& item) {
  ProvenanceReport rep;
  rep.upc = item.upc;
  rep.state = item.state;
  auto flag = [&](std::string what, std::optional<std::uint64_t> height = std::nullopt) {
    rep.anomalies.push_back(std::move(what));
    if (height && (!rep.failing_height || *height < *rep.failing_height)) rep.failing_height = height;
  };

  // (a) every block holding one of the item's events, and all their ancestors, verify.
  std::uint64_t last_height = 0;
  for (const auto& h : item.history) last_height = std::max(last_height, h.block_height);
  // The log may hold later events for the item than the state replayed so far.
  for (const auto& e : ledger.events_for_upc(item.upc)) last_height = std::max(last_height, e.block_height);
  auto chain = ledger.verify_chain();
  if (!chain.ok && *chain.first_bad_height <= last_height)
    flag("chain verification fails at height " + std::to_string(*chain.first_bad_height) + ": " + chain.reason,
         chain.first_bad_height);

  // Each history entry must be backed by a successful transaction carrying the same event.
  for (const auto& h : item.history) {
    auto loc = ledger.locate(h.tx_id);
    if (!loc || loc->height != h.block_height) {
      flag("event " + h.event + " not found at height " + std::to_string(h.block_height), h.block_height);
      continue;
    }
    auto receipt = ledger.receipt(h.tx_id);
    if (!receipt || !receipt->success) {
      flag("transaction for " + h.event + " did not succeed on chain", h.block_height);
      continue;
    }
    auto block = ledger.block(h.block_height);
    bool found = std::any_of(block.events.begin(), block.events.end(), [&](const ledger::EventRecord& e) {
      return e.name == h.event && e.upc == item.upc && e.tx_id == h.tx_id;
    });
    if (!found) flag("block " + std::to_string(h.block_height) + " lacks event " + h.event, h.block_height);
  }

  // (b) events form a gap-free prefix of the canonical order ending at the current state.
  if (item.history.size() != static_cast<std::size_t>(value_of(item.state)) + 1)
    flag("history length " + std::to_string(item.history.size()) + " does not match state " +
         std::string(name_of(item.state)));
  for (std::size_t i = 0; i < item.history.size(); ++i) {
    if (i >= kStateCount || item.history[i].event != kStateNames[i]) {
      flag("event " + std::to_string(i) + " is " + item.history[i].event + ", expected " +
               (i < kStateCount ? std::string(kStateNames[i]) : std::string("none")),
           item.history[i].block_height);
      break;
    }
    if (i > 0 && item.history[i].block_height < item.history[i - 1].block_height)
      flag("event " + item.history[i].event + " recorded before its predecessor", item.history[i].block_height);
  }

  // (c) hand-offs follow the custody rules.
  for (std::size_t i = 0; i < item.history.size() && i < kStateCount; ++i) {
    const auto& h = item.history[i];
    Address expected_prior = i == 0 ? Address{} : item.history[i - 1].new_owner;
    if (h.prior_owner != expected_prior) flag("hand-off at " + h.event + " does not continue from previous owner");
    auto owner = expected_owner(item, static_cast<ShipmentState>(i));
    if (!owner || h.new_owner != *owner) flag("owner after " + h.event + " violates custody rules");
  }
  if (!item.history.empty() && item.owner != item.history.back().new_owner)
    flag("current owner differs from last recorded hand-off");

  auto link_for = [&](access::Role role, ShipmentState s, const std::optional<Address>& party) {
    auto idx = static_cast<std::size_t>(value_of(s));
    if (!party || idx >= item.history.size()) return;
    const auto& h = item.history[idx];
    rep.custody_chain.push_back({role, *party, h.block_height, h.tx_id, h.event});
  };
  link_for(access::Role::Manufacturer, ShipmentState::ProducedByManufacturer, item.origin_manufacturer);
  link_for(access::Role::Distributor, ShipmentState::PurchasedByDistributor, item.distributor);
  link_for(access::Role::Retailer, ShipmentState::PurchasedByRetailer, item.retailer);
  link_for(access::Role::Consumer, ShipmentState::PurchasedByConsumer, item.consumer);

  rep.authentic = rep.anomalies.empty();
  return rep;
}

}  // namespace pharmachain::supply
