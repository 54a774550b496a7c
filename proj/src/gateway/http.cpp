#include "pharmachain/gateway/http.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>

#include "httplib.h"

namespace pharmachain::gateway {

namespace {
using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

bool valid_sku(const std::string& s) {
  if (s.empty() || s.size() > 128) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '-' || c == '_' || c == '.'; });
}

std::optional<std::int64_t> int_param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  std::size_t used = 0;
  auto n = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument(key);
  return n;
}

int status_code(ConsumeStatus s) {
  switch (s) {
    case ConsumeStatus::Accepted: return 202;
    case ConsumeStatus::Duplicate: return 200;
    case ConsumeStatus::Malformed: return 400;
    case ConsumeStatus::BadSignature:
    case ConsumeStatus::UnknownNode: return 401;
  }
  return 500;
}

// "http://host:port" -> client
std::unique_ptr<httplib::Client> client_for(const std::string& url, std::chrono::milliseconds timeout) {
  auto c = std::make_unique<httplib::Client>(url);
  c->set_keep_alive(false);
  c->set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
                            static_cast<long>((timeout.count() % 1000) * 1000));
  c->set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
                      static_cast<long>((timeout.count() % 1000) * 1000));
  return c;
}
}  // namespace

GatewayServer::GatewayServer(Gateway& gateway, std::string host, std::uint16_t port, std::size_t threads)
    : gateway_(gateway), host_(std::move(host)), port_(port), server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  server_->Get(R"(/shipments/([^/]*))", [this](const httplib::Request& req, httplib::Response& res) {
    auto sku = req.matches[1].str();
    if (!valid_sku(sku)) return send_json(res, 400, {{"error", "BadRequest"}, {"message", "malformed sku"}});
    auto r = gateway_.latest(sku);
    if (!r) return send_json(res, 404, {{"error", "SkuNotFound"}, {"sku", sku}});
    send_json(res, 200, r->to_json());
  });

  server_->Get(R"(/shipments/([^/]*)/audit)", [this](const httplib::Request& req, httplib::Response& res) {
    auto sku = req.matches[1].str();
    if (!valid_sku(sku)) return send_json(res, 400, {{"error", "BadRequest"}, {"message", "malformed sku"}});
    std::optional<std::int64_t> from, to;
    try {
      from = int_param(req, "from");
      to = int_param(req, "to");
    } catch (const std::exception&) {
      return send_json(res, 400, {{"error", "BadRequest"}, {"message", "from/to must be integer seconds"}});
    }
    json rows = json::array();
    for (const auto& row : gateway_.audit(sku, from, to)) rows.push_back(row.to_json());
    send_json(res, 200, rows);
  });

  server_->Post("/telemetry", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = gateway_.consume(req.body);
    send_json(res, status_code(s), {{"status", std::string(consume_status_name(s))}});
  });

  server_->Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
    auto s = gateway_.stats();
    send_json(res, 200,
              {{"accepted", s.accepted},
               {"duplicates", s.duplicates},
               {"bad_signature", s.bad_signature},
               {"malformed", s.malformed},
               {"unknown_node", s.unknown_node},
               {"audit_rows", gateway_.audit_all().size()}});
  });

  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });
}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  if (port_ == 0) {
    int p = server_->bind_to_any_port(host_);
    if (p < 0) throw std::runtime_error("cannot bind gateway on " + host_);
    port_ = static_cast<std::uint16_t>(p);
  } else if (!server_->bind_to_port(host_, port_)) {
    throw std::runtime_error("cannot bind gateway on " + host_ + ":" + std::to_string(port_));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void GatewayServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

json LoadReport::to_json() const {
  return {{"requests_sent", requests_sent},
          {"load_duration_s", load_duration_s},
          {"failed_requests", failed_requests},
          {"error_pct", error_pct},
          {"avg_ms", avg_ms},
          {"min_ms", min_ms},
          {"max_ms", max_ms},
          {"p95_ms", p95_ms},
          {"throughput_rps", throughput_rps}};
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

LoadReport run_load_test(const LoadTestOptions& o) {
  if (o.requests == 0) throw std::invalid_argument("request count must be positive");
  auto path = "/shipments/" + o.sku;
  {
    auto c = client_for(o.url, o.timeout);
    auto res = c->Get(path);
    if (!res) throw TargetUnavailable("gateway at " + o.url + " is not reachable: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw TargetUnavailable("gateway answered " + std::to_string(res->status) + " for sku " + o.sku);
  }

  using clock = std::chrono::steady_clock;
  const auto threads = std::max<std::size_t>(1, std::min(o.threads, o.requests));
  std::vector<double> latency(o.requests, -1);
  std::atomic<std::size_t> failed{0};
  std::vector<clock::time_point> sent(o.requests), done(o.requests);
  const auto start = clock::now() + std::chrono::milliseconds(50);
  const double step_s = o.duration_s / static_cast<double>(o.requests);

  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      // Request k of thread t goes out at slot k * threads + t.
      for (std::size_t i = t; i < o.requests; i += threads) {
        std::this_thread::sleep_until(start + std::chrono::duration_cast<clock::duration>(
                                                  std::chrono::duration<double>(step_s * static_cast<double>(i))));
        auto c = client_for(o.url, o.timeout);
        auto t0 = clock::now();
        auto res = c->Get(path);
        auto t1 = clock::now();
        sent[i] = t0;
        done[i] = t1;
        latency[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (!res || res->status != 200) ++failed;
      }
    });
  }
  for (auto& th : pool) th.join();

  LoadReport r;
  r.requests_sent = o.requests;
  r.failed_requests = failed;
  r.error_pct = 100.0 * static_cast<double>(r.failed_requests) / static_cast<double>(r.requests_sent);
  r.latencies_ms = latency;
  r.avg_ms = std::accumulate(latency.begin(), latency.end(), 0.0) / static_cast<double>(latency.size());
  r.min_ms = *std::min_element(latency.begin(), latency.end());
  r.max_ms = *std::max_element(latency.begin(), latency.end());
  r.p95_ms = percentile(latency, 95);
  auto first = *std::min_element(sent.begin(), sent.end());
  auto last = *std::max_element(done.begin(), done.end());
  r.load_duration_s = std::chrono::duration<double>(last - first).count();
  r.throughput_rps = static_cast<double>(r.requests_sent - r.failed_requests) / r.load_duration_s;
  return r;
}

HttpDataSource::HttpDataSource(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

oracle::FetchResult HttpDataSource::fetch(const std::string& sku) {
  auto c = client_for(url_, timeout_);
  auto res = c->Get("/shipments/" + sku);
  if (!res) return {oracle::FetchStatus::Unreachable, std::nullopt};
  if (res->status == 404 || res->status == 400) return {oracle::FetchStatus::NotFound, std::nullopt};
  if (res->status != 200) return {oracle::FetchStatus::Unreachable, std::nullopt};
  try {
    return {oracle::FetchStatus::Ok, telemetry::TelemetryReading::from_json(json::parse(res->body))};
  } catch (const std::exception&) {
    return {oracle::FetchStatus::Unreachable, std::nullopt};
  }
}

HttpPublisher::HttpPublisher(std::string url) : url_(std::move(url)) {}

bool HttpPublisher::publish(const std::string&, const std::string& payload) {
  auto c = client_for(url_, std::chrono::seconds(5));
  auto res = c->Post("/telemetry", payload, "application/json");
  // A rejection is final; only transport failures are worth retrying.
  return static_cast<bool>(res);
}

}  // namespace pharmachain::gateway
