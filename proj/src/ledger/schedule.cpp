#include "pharmachain/ledger/schedule.hpp"

#include <chrono>

namespace pharmachain::ledger {

Clock system_clock() {
  return [] {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count());
  };
}

}  // namespace pharmachain::ledger
