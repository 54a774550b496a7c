#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace pharmachain::supply {

// Lifecycle of one shipment item. Values are fixed; they appear on the ledger.
enum class ShipmentState : std::uint8_t {
  ProducedByManufacturer = 0,
  UpdateInventoryByManufacturer = 1,
  PurchasedByDistributor = 2,
  ShippedByManufacturer = 3,
  ReceivedByDistributor = 4,
  ProcessedByDistributor = 5,
  PackagedByDistributor = 6,
  ForSaleByDistributor = 7,
  PurchasedByRetailer = 8,
  ShippedByDistributor = 9,
  ReceivedByRetailer = 10,
  ForSaleByRetailer = 11,
  PurchasedByConsumer = 12,
};

inline constexpr std::size_t kStateCount = 13;

// State names double as the event names emitted on entering each state.
inline constexpr std::array<std::string_view, kStateCount> kStateNames = {
    "ProducedByManufacturer", "UpdateInventoryByManufacturer", "PurchasedByDistributor",
    "ShippedByManufacturer",  "ReceivedByDistributor",         "ProcessedByDistributor",
    "PackagedByDistributor",  "ForSaleByDistributor",          "PurchasedByRetailer",
    "ShippedByDistributor",   "ReceivedByRetailer",            "ForSaleByRetailer",
    "PurchasedByConsumer",
};

// Modifier names that test "item is in state s".
inline constexpr std::array<std::string_view, kStateCount> kStateGuardNames = {
    "producedByManufacturer", "updateInventoryByManufacturer", "purchasedByDistributor",
    "shippedByManufacturer",  "receivedByDistributor",         "processByDistributor",
    "packagedByDistributor",  "forSaleByDistributor",          "purchasedByRetailer",
    "shippedByDistributor",   "receivedByRetailer",            "forSaleByRetailer",
    "purchasedByConsumer",
};

constexpr std::uint8_t value_of(ShipmentState s) { return static_cast<std::uint8_t>(s); }
constexpr std::string_view name_of(ShipmentState s) { return kStateNames[value_of(s)]; }
constexpr std::string_view guard_name_of(ShipmentState s) { return kStateGuardNames[value_of(s)]; }

inline std::optional<ShipmentState> state_from_value(unsigned v) {
  if (v >= kStateCount) return std::nullopt;
  return static_cast<ShipmentState>(v);
}

inline std::optional<ShipmentState> state_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kStateCount; ++i)
    if (kStateNames[i] == name) return static_cast<ShipmentState>(i);
  return std::nullopt;
}

}  // namespace pharmachain::supply
