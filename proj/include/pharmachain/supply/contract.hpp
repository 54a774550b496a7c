#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pharmachain/access/roles.hpp"
#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/state_machine.hpp"
#include "pharmachain/oracle/bridge.hpp"
#include "pharmachain/supply/operations.hpp"
#include "pharmachain/supply/shipment_state.hpp"

namespace pharmachain::supply {

// Fixed identity of the deployed contract; it holds the LINK that pays for oracle requests.
Address default_contract_account();

struct GenesisConfig {
  Address owner;
  Address contract_account = default_contract_account();
  oracle::LinkAmount initial_link = oracle::LinkAmount::tokens(1000);
  oracle::OracleConfig oracle;

  Bytes encode() const;
  static GenesisConfig decode(ByteView data);
};

struct HistoryEntry {
  std::string event;
  std::uint64_t block_height = 0;
  Hash256 tx_id;
  std::uint64_t timestamp_ms = 0;
  Address prior_owner;  // zero for the creation entry
  Address new_owner;

  bool operator==(const HistoryEntry&) const = default;
};

struct ShipmentItem {
  std::uint64_t upc = 0;
  std::string sku;
  std::string drug_name;
  ShipmentState state = ShipmentState::ProducedByManufacturer;
  Address owner;
  Address origin_manufacturer;
  std::optional<Address> distributor;
  std::optional<Address> retailer;
  std::optional<Address> consumer;
  std::vector<HistoryEntry> history;

  Bytes encode() const;
  static ShipmentItem decode(ByteView data);
  bool operator==(const ShipmentItem&) const = default;
};

class SupplyChainContract final : public ledger::StateMachine {
 public:
  explicit SupplyChainContract(GenesisConfig genesis);

  bool knows_operation(std::string_view name) const override;
  void begin_block(const ledger::BlockContext& ctx) override;
  ledger::TxOutcome apply(const ledger::Transaction& tx, const ledger::TxContext& ctx) override;
  ledger::KvMap export_state() const override;
  void import_state(const ledger::KvMap& kv) override;
  std::unique_ptr<ledger::StateMachine> fresh_genesis() const override;

  const GenesisConfig& genesis() const { return genesis_; }
  const access::RoleRegistry& roles() const { return roles_; }
  const oracle::OracleBridge& oracle() const { return oracle_; }
  const std::map<std::uint64_t, ShipmentItem>& items() const { return items_; }
  const ShipmentItem* find_item(std::uint64_t upc) const;
  // Throws ContractError("UnknownUPC").
  const ShipmentItem& fetch_item_details(std::uint64_t upc) const;

 private:
  using Events = std::vector<std::pair<std::string, std::uint64_t>>;

  std::string dispatch(const ledger::Transaction& tx, const ledger::TxContext& ctx, Events& events);
  std::string run_lifecycle(const LifecycleStep& step, const ledger::Args& args, const ledger::TxContext& ctx,
                            Events& events);
  std::string request(const std::string& sku, oracle::Field field, const ledger::TxContext& ctx);

  GenesisConfig genesis_;
  access::RoleRegistry roles_;
  std::map<std::uint64_t, ShipmentItem> items_;
  oracle::OracleBridge oracle_;
};

// Id of the index-th oracle request raised by a transaction.
Hash256 oracle_request_id(const Hash256& tx_id, std::uint32_t index);

}  // namespace pharmachain::supply
