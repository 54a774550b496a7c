#pragma once

// Catalog of every contract operation: wire name, typed parameters, and for
// lifecycle operations the guard chain and state transition.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "pharmachain/access/roles.hpp"
#include "pharmachain/ledger/transaction.hpp"
#include "pharmachain/supply/shipment_state.hpp"

namespace pharmachain::supply {

enum class ParamType { U64, I64, String, Address, Hash, Bool };

std::string_view param_type_name(ParamType t);

struct ParamSpec {
  std::string_view name;
  ParamType type;
};

enum class OperationKind { Lifecycle, RoleAdmin, Oracle, Ownership };

struct OperationSpec {
  std::string_view name;
  OperationKind kind;
  std::vector<ParamSpec> params;
};

const std::vector<OperationSpec>& operation_catalog();
const OperationSpec* find_operation(std::string_view name);
// True when args match the parameter list in count and type.
bool args_match(const OperationSpec& spec, const ledger::Args& args);

// Which recorded address verifyCaller compares the sender against.
enum class CallerBinding { None, Owner, OriginManufacturer, Distributor };
// Which custody field a successful step overwrites with the caller.
enum class CustodyChange { None, Distributor, Retailer, Consumer };

struct LifecycleStep {
  std::string_view operation;
  access::Role role;
  std::optional<ShipmentState> required_state;  // nullopt: creation
  CallerBinding binding;
  ShipmentState target;  // also names the emitted event
  CustodyChange custody;
};

inline constexpr std::array<LifecycleStep, 13> kLifecycle = {{
    {"produceItemByManufacturer", access::Role::Manufacturer, std::nullopt, CallerBinding::None,
     ShipmentState::ProducedByManufacturer, CustodyChange::None},
    {"sellItemByManufacturer", access::Role::Manufacturer, ShipmentState::ProducedByManufacturer,
     CallerBinding::Owner, ShipmentState::UpdateInventoryByManufacturer, CustodyChange::None},
    {"purchaseItemByDistributor", access::Role::Distributor, ShipmentState::UpdateInventoryByManufacturer,
     CallerBinding::None, ShipmentState::PurchasedByDistributor, CustodyChange::Distributor},
    {"shippedItemByManufacturer", access::Role::Manufacturer, ShipmentState::PurchasedByDistributor,
     CallerBinding::OriginManufacturer, ShipmentState::ShippedByManufacturer, CustodyChange::None},
    {"receivedItemByDistributor", access::Role::Distributor, ShipmentState::ShippedByManufacturer,
     CallerBinding::Owner, ShipmentState::ReceivedByDistributor, CustodyChange::None},
    {"processedItemByDistributor", access::Role::Distributor, ShipmentState::ReceivedByDistributor,
     CallerBinding::Owner, ShipmentState::ProcessedByDistributor, CustodyChange::None},
    {"packageItemByDistributor", access::Role::Distributor, ShipmentState::ProcessedByDistributor,
     CallerBinding::Owner, ShipmentState::PackagedByDistributor, CustodyChange::None},
    {"sellItemByDistributor", access::Role::Distributor, ShipmentState::PackagedByDistributor,
     CallerBinding::Owner, ShipmentState::ForSaleByDistributor, CustodyChange::None},
    {"purchaseItemByRetailer", access::Role::Retailer, ShipmentState::ForSaleByDistributor, CallerBinding::None,
     ShipmentState::PurchasedByRetailer, CustodyChange::Retailer},
    {"shippedItemByDistributor", access::Role::Distributor, ShipmentState::PurchasedByRetailer,
     CallerBinding::Distributor, ShipmentState::ShippedByDistributor, CustodyChange::None},
    {"receivedItemByRetailer", access::Role::Retailer, ShipmentState::ShippedByDistributor, CallerBinding::Owner,
     ShipmentState::ReceivedByRetailer, CustodyChange::None},
    {"sellItemByRetailer", access::Role::Retailer, ShipmentState::ReceivedByRetailer, CallerBinding::Owner,
     ShipmentState::ForSaleByRetailer, CustodyChange::None},
    // Also guarded by forSaleByRetailer so unsold stock cannot be bought.
    {"purchaseItemByConsumer", access::Role::Consumer, ShipmentState::ForSaleByRetailer, CallerBinding::None,
     ShipmentState::PurchasedByConsumer, CustodyChange::Consumer},
}};

const LifecycleStep* find_lifecycle_step(std::string_view operation);

// Standalone oracle request operations and the channel each one asks for.
struct RequestOperation {
  std::string_view operation;
  std::string_view field;
};
inline constexpr std::array<RequestOperation, 4> kRequestOperations = {{
    {"requestTemperatureData", "temperature"},
    {"requestHumidityData", "humidity"},
    {"requestLatitude", "latitude"},
    {"requestLongitude", "longitude"},
}};

}  // namespace pharmachain::supply
