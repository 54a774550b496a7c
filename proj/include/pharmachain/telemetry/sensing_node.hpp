#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "pharmachain/crypto.hpp"
#include "pharmachain/telemetry/broker.hpp"
#include "pharmachain/telemetry/reading.hpp"
#include "pharmachain/telemetry/scenario.hpp"

namespace pharmachain::telemetry {

struct SensingNodeOptions {
  std::string node_id = "sensor-0";
  std::uint64_t interval_s = 60;
  std::string topic = kDefaultTopic;
  double jitter_sigma = 0;  // Gaussian noise on temp and hum
  std::uint64_t seed = 0;
  std::size_t queue_capacity = 256;  // messages held while the broker is unavailable
};

// Simulated shipment tracker. Time is the scenario offset in seconds and only
// advances by tick(), so a run is reproducible from (scenario, options).
class SensingNode {
 public:
  SensingNode(Scenario scenario, KeyPair key, SensingNodeOptions options, Publisher& publisher);

  // Samples the scenario at the current offset, signs, queues and flushes, then
  // advances one interval. Returns true if the queue drained (this reading was published).
  bool tick();
  // Ticks at offsets 0, interval, 2*interval, ... up to and including duration_s.
  std::vector<bool> run(std::uint64_t duration_s);
  // Wall-clock mode: one tick per interval until count ticks have run (0: no limit) or stop is set.
  void run_realtime(std::size_t count, const std::atomic<bool>& stop);

  SignedMessage sample(std::uint64_t offset_s);

  std::uint64_t offset() const { return offset_; }
  std::size_t queued() const { return queue_.size(); }
  std::size_t dropped() const { return dropped_; }
  std::size_t published() const { return published_; }
  const SensingNodeOptions& options() const { return options_; }

 private:
  bool flush();

  Scenario scenario_;
  KeyPair key_;
  SensingNodeOptions options_;
  Publisher& publisher_;
  std::mt19937_64 rng_;
  std::uint64_t offset_ = 0;
  std::deque<std::string> queue_;
  std::size_t dropped_ = 0;
  std::size_t published_ = 0;
};

}  // namespace pharmachain::telemetry
