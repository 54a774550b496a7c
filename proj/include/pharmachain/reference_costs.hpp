#pragma once

// Measured cost of each action on the reference deployment: Ethereum gas fee,
// oracle fee and block time. The ETH column is informational only; the LINK
// column seeds the default oracle fee schedule and the block-time column seeds
// the interval simulator.

#include <array>
#include <cstdint>
#include <string_view>

namespace pharmachain::reference {

struct ActionCost {
  std::string_view action;
  std::string_view operation;  // contract operation, empty for deployment
  std::string_view eth_fee;
  std::string_view link_fee;  // tokens
  std::uint32_t block_time_s;
};

inline constexpr std::array<ActionCost, 18> kActionCosts = {{
    {"Contract Deployment", "", "0.00898", "0", 8},
    {"Add Manufacturer", "addManufacturer", "0.00011", "0", 4},
    {"Add Distributor", "addDistributor", "0.00011", "0", 4},
    {"Add Retailer", "addRetailer", "0.00011", "0", 8},
    {"Add Consumer", "addConsumer", "0.00011", "0", 4},
    {"Produce Item By Manufacturer", "produceItemByManufacturer", "0.00151", "0.5", 4},
    {"Sell Item By Manufacturer", "sellItemByManufacturer", "0.00143", "0.5", 8},
    {"Purchase Item By Distributor", "purchaseItemByDistributor", "0.00118", "0.4", 4},
    {"Shipped Item By Manufacturer", "shippedItemByManufacturer", "0.00106", "0.4", 4},
    {"Received Item By Distributor", "receivedItemByDistributor", "0.00106", "0.4", 8},
    {"Processed Item By Distributor", "processedItemByDistributor", "0.00106", "0.4", 4},
    {"Packaged Item By Distributor", "packageItemByDistributor", "0.00106", "0.4", 8},
    {"Sell Item By Distributor", "sellItemByDistributor", "0.00107", "0.4", 4},
    {"Purchase Item By Retailer", "purchaseItemByRetailer", "0.00118", "0.4", 4},
    {"Ship Item By Distributor", "shippedItemByDistributor", "0.00106", "0.4", 4},
    {"Receive Item By Retailer", "receivedItemByRetailer", "0.00106", "0.4", 8},
    {"Sell Item By Retailer", "sellItemByRetailer", "0.00106", "0.4", 4},
    {"Purchase Item By Consumer", "purchaseItemByConsumer", "0.00118", "0.4", 4},
}};

// Average transaction time quoted alongside the measurements above. It does not
// equal the mean of the block-time column (96 s / 18 = 5.33 s).
inline constexpr double kReportedAverageBlockTimeS = 5.6;

// Gateway load-test figures from the reference cloud deployment.
inline constexpr std::uint32_t kLoadTestRequests = 1000;
inline constexpr double kLoadTestDurationS = 2.0;
inline constexpr double kLoadTestAverageMs = 285.196;
inline constexpr double kLoadTestMinMs = 78;
inline constexpr double kLoadTestMaxMs = 1960;
inline constexpr double kLoadTestThroughputRps = 16.66;

}  // namespace pharmachain::reference
