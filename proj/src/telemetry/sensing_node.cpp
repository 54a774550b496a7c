#include "pharmachain/telemetry/sensing_node.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace pharmachain::telemetry {

SensingNode::SensingNode(Scenario scenario, KeyPair key, SensingNodeOptions options, Publisher& publisher)
    : scenario_(std::move(scenario)),
      key_(std::move(key)),
      options_(std::move(options)),
      publisher_(publisher),
      rng_(options_.seed) {
  if (options_.interval_s == 0) throw std::invalid_argument("sensing interval must be positive");
  if (scenario_.breakpoints.empty()) throw TelemetryError("MalformedScenario", "scenario has no breakpoints");
}

SignedMessage SensingNode::sample(std::uint64_t offset_s) {
  auto s = scenario_.at(static_cast<double>(offset_s));
  if (options_.jitter_sigma > 0) {
    std::normal_distribution<double> noise(0.0, options_.jitter_sigma);
    s.temp += noise(rng_);
    s.hum = std::clamp(s.hum + noise(rng_), 0.0, 100.0);
  }
  TelemetryReading r;
  r.timestamp = scenario_.start_timestamp + static_cast<std::int64_t>(offset_s);
  r.lat = s.lat;
  r.lng = s.lng;
  r.sku = scenario_.sku;
  r.lot = scenario_.lot;
  r.drug_name = scenario_.drug_name;
  r.temp = s.temp;
  r.hum = s.hum;
  return sign_reading(r, options_.node_id, key_);
}

bool SensingNode::flush() {
  while (!queue_.empty()) {
    if (!publisher_.publish(options_.topic, queue_.front())) return false;
    queue_.pop_front();
    ++published_;
  }
  return true;
}

bool SensingNode::tick() {
  queue_.push_back(sample(offset_).serialize());
  while (queue_.size() > options_.queue_capacity) {
    queue_.pop_front();
    ++dropped_;
  }
  offset_ += options_.interval_s;
  return flush();
}

std::vector<bool> SensingNode::run(std::uint64_t duration_s) {
  std::vector<bool> status;
  while (offset_ <= duration_s) status.push_back(tick());
  return status;
}

void SensingNode::run_realtime(std::size_t count, const std::atomic<bool>& stop) {
  auto next = std::chrono::steady_clock::now();
  for (std::size_t i = 0; (count == 0 || i < count) && !stop; ++i) {
    tick();
    next += std::chrono::seconds(options_.interval_s);
    while (!stop && std::chrono::steady_clock::now() < next)
      std::this_thread::sleep_for(std::min<std::chrono::steady_clock::duration>(
          next - std::chrono::steady_clock::now(), std::chrono::milliseconds(100)));
  }
}

}  // namespace pharmachain::telemetry
