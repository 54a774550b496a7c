#include "pharmachain/gateway/notifications.hpp"

#include <stdexcept>

namespace pharmachain::gateway {

nlohmann::json Notification::to_json() const {
  return {{"recipients", recipients}, {"subject", subject}, {"body", body}, {"sent_at", sent_at_ms}};
}

OutboxSink::OutboxSink(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw std::runtime_error("cannot open outbox " + path.string());
}

void OutboxSink::send(const Notification& n) {
  std::lock_guard lock(mu_);
  out_ << n.to_json().dump() << '\n';
  out_.flush();
}

}  // namespace pharmachain::gateway
