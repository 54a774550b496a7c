#pragma once

// Local publish/subscribe broker over TCP.
//
// Frame: u32 length of the rest | u8 type | u16 topic length | topic | u32 payload length | payload
// (all big-endian). Types: 1 SUBSCRIBE, 2 PUBLISH, 3 MESSAGE, 4 ACK. Routing is by exact topic
// match. Every SUBSCRIBE and PUBLISH is answered with an ACK on the same connection; a PUBLISH is
// delivered as a MESSAGE to every connection subscribed to its topic.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pharmachain/bytes.hpp"

namespace pharmachain::telemetry {

inline constexpr const char* kDefaultTopic = "pharmachain/telemetry";

enum class FrameType : std::uint8_t { Subscribe = 1, Publish = 2, Message = 3, Ack = 4 };

struct Frame {
  FrameType type = FrameType::Ack;
  std::string topic;
  std::string payload;
};

Bytes encode_frame(const Frame& f);
// Decodes the bytes after the length prefix. Throws DecodeError.
Frame decode_frame_body(ByteView body);

// Anything a sensing node can hand a message to.
class Publisher {
 public:
  virtual ~Publisher() = default;
  // False when the message could not be delivered to the broker.
  virtual bool publish(const std::string& topic, const std::string& payload) = 0;
};

class Broker {
 public:
  // port 0 picks a free port.
  explicit Broker(std::uint16_t port = 0, std::string host = "127.0.0.1");
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  void start();
  void stop();
  std::uint16_t port() const { return port_; }
  std::uint64_t published() const { return published_; }

 private:
  struct Connection {
    int fd = -1;
    std::mutex write_mu;
    std::set<std::string> topics;
  };

  void accept_loop();
  void serve(std::shared_ptr<Connection> conn);

  std::string host_;
  std::uint16_t port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::atomic<std::uint64_t> published_{0};
  std::thread accept_thread_;
  std::mutex mu_;
  std::vector<std::shared_ptr<Connection>> connections_;
  std::vector<std::thread> workers_;
};

// Publishing client. Connects lazily and reconnects on the next publish after a failure.
class BrokerClient : public Publisher {
 public:
  BrokerClient(std::string host, std::uint16_t port);
  ~BrokerClient() override;

  bool publish(const std::string& topic, const std::string& payload) override;
  bool connected() const { return fd_ >= 0; }

 private:
  bool ensure_connected();
  void disconnect();

  std::string host_;
  std::uint16_t port_;
  int fd_ = -1;
  std::mutex mu_;
};

// Receives every MESSAGE for one topic on a background thread.
class Subscription {
 public:
  using Handler = std::function<void(const std::string& payload)>;
  // Throws std::runtime_error if the broker cannot be reached.
  Subscription(const std::string& host, std::uint16_t port, std::string topic, Handler handler);
  ~Subscription();
  void stop();

 private:
  int fd_ = -1;
  std::atomic<bool> running_{true};
  std::thread reader_;
};

// In-process stand-in for the broker: publish calls the handler directly.
class DirectPublisher : public Publisher {
 public:
  explicit DirectPublisher(std::function<void(const std::string&)> handler) : handler_(std::move(handler)) {}
  bool publish(const std::string&, const std::string& payload) override {
    if (!available) return false;
    handler_(payload);
    return true;
  }
  bool available = true;

 private:
  std::function<void(const std::string&)> handler_;
};

}  // namespace pharmachain::telemetry
