#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pharmachain::ledger {

// Milliseconds since the Unix epoch.
using Clock = std::function<std::uint64_t()>;

Clock system_clock();

class ManualClock {
 public:
  explicit ManualClock(std::uint64_t start_ms = 0) : now_(start_ms) {}
  std::uint64_t now() const { return now_.load(); }
  void advance(std::uint64_t ms) { now_ += ms; }
  void set(std::uint64_t ms) { now_ = ms; }
  Clock as_clock() {
    return [this] { return now(); };
  }

 private:
  std::atomic<std::uint64_t> now_;
};

// Gap between consecutive blocks. A single entry is a fixed interval; a longer
// list is replayed cyclically, block h (h >= 1) following its parent by
// intervals[(h - 1) % size]. An interval of 0 means blocks are produced on demand.
class IntervalSchedule {
 public:
  IntervalSchedule() : intervals_ms_{0} {}
  explicit IntervalSchedule(std::vector<std::uint64_t> intervals_ms) : intervals_ms_(std::move(intervals_ms)) {
    if (intervals_ms_.empty()) throw std::invalid_argument("interval schedule must not be empty");
  }
  static IntervalSchedule fixed(std::uint64_t ms) { return IntervalSchedule({ms}); }

  std::uint64_t interval_before(std::uint64_t height) const {
    if (height == 0) return 0;
    return intervals_ms_[(height - 1) % intervals_ms_.size()];
  }
  bool on_demand() const { return intervals_ms_.size() == 1 && intervals_ms_[0] == 0; }
  const std::vector<std::uint64_t>& intervals() const { return intervals_ms_; }

 private:
  std::vector<std::uint64_t> intervals_ms_;
};

}  // namespace pharmachain::ledger
