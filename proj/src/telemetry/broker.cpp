#include "pharmachain/telemetry/broker.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace pharmachain::telemetry {

namespace {
bool write_all(int fd, const Bytes& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    auto n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

bool read_exact(int fd, std::uint8_t* out, std::size_t len) {
  std::size_t off = 0;
  while (off < len) {
    auto n = ::recv(fd, out + off, len - off, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

constexpr std::uint32_t kMaxFrame = 16 * 1024 * 1024;

std::optional<Frame> read_frame(int fd) {
  std::uint8_t len_bytes[4];
  if (!read_exact(fd, len_bytes, 4)) return std::nullopt;
  ByteReader lr(ByteView(len_bytes, 4));
  auto len = lr.u32();
  if (len > kMaxFrame) return std::nullopt;
  Bytes body(len);
  if (!read_exact(fd, body.data(), len)) return std::nullopt;
  try {
    return decode_frame_body(body);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

int connect_to(const std::string& host, std::uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return -1;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host == "localhost" ? "127.0.0.1" : host.c_str(), &addr.sin_addr) != 1 ||
      ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    return -1;
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}
}  // namespace

Bytes encode_frame(const Frame& f) {
  ByteWriter body;
  body.u8(static_cast<std::uint8_t>(f.type));
  body.u16(static_cast<std::uint16_t>(f.topic.size()));
  body.raw(ByteView(reinterpret_cast<const std::uint8_t*>(f.topic.data()), f.topic.size()));
  body.str(f.payload);
  ByteWriter w;
  w.blob(body.bytes());
  return w.take();
}

Frame decode_frame_body(ByteView body) {
  ByteReader r(body);
  Frame f;
  auto type = r.u8();
  if (type < 1 || type > 4) throw DecodeError("unknown frame type");
  f.type = static_cast<FrameType>(type);
  auto tlen = r.u16();
  auto topic = r.raw(tlen);
  f.topic.assign(topic.begin(), topic.end());
  f.payload = r.str();
  r.expect_done();
  return f;
}

Broker::Broker(std::uint16_t port, std::string host) : host_(std::move(host)), port_(port) {}

Broker::~Broker() { stop(); }

void Broker::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("broker: socket failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  ::inet_pton(AF_INET, host_ == "localhost" ? "127.0.0.1" : host_.c_str(), &addr.sin_addr);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("broker: cannot listen on port " + std::to_string(port_) + ": " + std::strerror(errno));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Broker::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (auto& c : connections_) ::shutdown(c->fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Broker::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    std::lock_guard lock(mu_);
    if (!running_) {
      ::close(fd);
      return;
    }
    connections_.push_back(conn);
    workers_.emplace_back([this, conn] { serve(conn); });
  }
}

void Broker::serve(std::shared_ptr<Connection> conn) {
  auto send = [](Connection& c, const Frame& f) {
    std::lock_guard lock(c.write_mu);
    return c.fd >= 0 && write_all(c.fd, encode_frame(f));
  };
  while (running_) {
    auto frame = read_frame(conn->fd);
    if (!frame) break;
    if (frame->type == FrameType::Subscribe) {
      {
        std::lock_guard lock(mu_);
        conn->topics.insert(frame->topic);
      }
      send(*conn, {FrameType::Ack, frame->topic, ""});
    } else if (frame->type == FrameType::Publish) {
      std::vector<std::shared_ptr<Connection>> targets;
      {
        std::lock_guard lock(mu_);
        for (auto& c : connections_)
          if (c->topics.contains(frame->topic)) targets.push_back(c);
      }
      for (auto& t : targets) send(*t, {FrameType::Message, frame->topic, frame->payload});
      ++published_;
      send(*conn, {FrameType::Ack, frame->topic, ""});
    }
  }
  std::lock_guard lock(mu_);
  connections_.erase(std::remove(connections_.begin(), connections_.end(), conn), connections_.end());
  std::lock_guard wlock(conn->write_mu);
  ::close(conn->fd);
  conn->fd = -1;
}

BrokerClient::BrokerClient(std::string host, std::uint16_t port) : host_(std::move(host)), port_(port) {}

BrokerClient::~BrokerClient() { disconnect(); }

bool BrokerClient::ensure_connected() {
  if (fd_ >= 0) return true;
  fd_ = connect_to(host_, port_);
  return fd_ >= 0;
}

void BrokerClient::disconnect() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

bool BrokerClient::publish(const std::string& topic, const std::string& payload) {
  std::lock_guard lock(mu_);
  if (!ensure_connected()) return false;
  if (!write_all(fd_, encode_frame({FrameType::Publish, topic, payload}))) {
    disconnect();
    return false;
  }
  auto ack = read_frame(fd_);
  if (!ack || ack->type != FrameType::Ack) {
    disconnect();
    return false;
  }
  return true;
}

Subscription::Subscription(const std::string& host, std::uint16_t port, std::string topic, Handler handler) {
  fd_ = connect_to(host, port);
  if (fd_ < 0) throw std::runtime_error("cannot reach broker at " + host + ":" + std::to_string(port));
  if (!write_all(fd_, encode_frame({FrameType::Subscribe, topic, ""}))) {
    ::close(fd_);
    throw std::runtime_error("subscribe failed");
  }
  auto ack = read_frame(fd_);
  if (!ack || ack->type != FrameType::Ack) {
    ::close(fd_);
    throw std::runtime_error("broker did not acknowledge subscription");
  }
  reader_ = std::thread([this, handler = std::move(handler)] {
    while (running_) {
      auto f = read_frame(fd_);
      if (!f) break;
      if (f->type == FrameType::Message) handler(f->payload);
    }
  });
}

Subscription::~Subscription() { stop(); }

void Subscription::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(fd_, SHUT_RDWR);
  if (reader_.joinable()) reader_.join();
  ::close(fd_);
}

}  // namespace pharmachain::telemetry
