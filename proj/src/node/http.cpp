#include "pharmachain/node/http.hpp"

#include "httplib.h"

namespace pharmachain::node {

NodeServer::NodeServer(Service& service, std::string host, std::uint16_t port, std::size_t threads)
    : service_(service), host_(std::move(host)), port_(port), server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Query q;
    for (const auto& [k, v] : req.params) q[k] = v;
    auto out = service_.handle(req.method, req.path, q, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  // The browser console is served from another origin.
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server_->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

NodeServer::~NodeServer() { stop(); }

void NodeServer::start() {
  if (port_ == 0) {
    int p = server_->bind_to_any_port(host_);
    if (p < 0) throw std::runtime_error("cannot bind node API on " + host_);
    port_ = static_cast<std::uint16_t>(p);
  } else if (!server_->bind_to_port(host_, port_)) {
    throw std::runtime_error("cannot bind node API on " + host_ + ":" + std::to_string(port_));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void NodeServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

HttpTransport::HttpTransport(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

Response HttpTransport::call(std::string_view method, std::string_view target, const nlohmann::json& body) {
  httplib::Client c(url_);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_).count();
  c.set_connection_timeout(5, 0);
  c.set_read_timeout(secs, 0);
  c.set_write_timeout(secs, 0);
  httplib::Result res = method == "POST"
                            ? c.Post(std::string(target), body.is_null() ? "" : body.dump(), "application/json")
                            : c.Get(std::string(target));
  if (!res)
    return {0, {{"error", "Unreachable"}, {"message", "node at " + url_ + ": " + httplib::to_string(res.error())}}};
  Response out{res->status, nullptr};
  try {
    out.body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    out.body = {{"error", "BadResponse"}, {"message", res->body}};
  }
  return out;
}

}  // namespace pharmachain::node
