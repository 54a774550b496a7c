#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace pharmachain::gateway {

struct Notification {
  std::vector<std::string> recipients;
  std::string subject;
  nlohmann::json body;  // {"rule": ..., "reading": {...}}
  std::uint64_t sent_at_ms = 0;

  nlohmann::json to_json() const;
};

class NotificationSink {
 public:
  virtual ~NotificationSink() = default;
  virtual void send(const Notification& n) = 0;
};

class MemorySink : public NotificationSink {
 public:
  void send(const Notification& n) override {
    std::lock_guard lock(mu_);
    sent_.push_back(n);
  }
  std::vector<Notification> sent() const {
    std::lock_guard lock(mu_);
    return sent_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<Notification> sent_;
};

// Appends one JSON line per notification; stands in for e-mail delivery.
class OutboxSink : public NotificationSink {
 public:
  explicit OutboxSink(const std::filesystem::path& path);
  void send(const Notification& n) override;

 private:
  std::mutex mu_;
  std::ofstream out_;
};

}  // namespace pharmachain::gateway
