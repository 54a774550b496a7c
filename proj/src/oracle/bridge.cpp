#include "pharmachain/oracle/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pharmachain/contract_error.hpp"

namespace pharmachain::oracle {

namespace {
constexpr std::array<std::string_view, 4> kFieldNames = {"temperature", "humidity", "latitude", "longitude"};
constexpr std::array<std::string_view, 4> kReadingKeys = {"temp", "hum", "lat", "lng"};
constexpr std::array<std::string_view, 4> kCallbacks = {"fulfillTemperature", "fulfillHumidity",
                                                        "fulfillLatitude", "fulfillLongitude"};
constexpr std::array<std::string_view, 4> kStatusNames = {"pending", "fulfilled", "failed", "expired"};

constexpr std::string_view kRequestPrefix = "oracle/request/";
constexpr std::string_view kValuePrefix = "oracle/value/";
constexpr std::string_view kBalancePrefix = "link/balance/";
constexpr std::string_view kEscrowKey = "link/escrow";

Bytes encode_request(const OracleRequest& r) {
  ByteWriter w;
  w.raw(r.id.view());
  w.str(r.job_id);
  w.raw(r.requester.view());
  w.raw(r.initiator.view());
  w.str(r.sku);
  w.u8(static_cast<std::uint8_t>(r.field));
  w.str(r.callback);
  r.fee.encode(w);
  w.u8(static_cast<std::uint8_t>(r.status));
  w.str(r.close_reason);
  w.u64(r.created_height);
  w.u64(r.deadline_ms);
  w.u32(static_cast<std::uint32_t>(r.responses.size()));
  for (const auto& resp : r.responses) {
    w.raw(resp.node.view());
    w.i64(resp.value);
    w.u8(resp.ok ? 1 : 0);
  }
  w.u8(r.result ? 1 : 0);
  w.i64(r.result.value_or(0));
  w.u64(r.delivered_at);
  w.u32(static_cast<std::uint32_t>(r.payouts.size()));
  for (const auto& [node, amount] : r.payouts) {
    w.raw(node.view());
    amount.encode(w);
  }
  return w.take();
}

OracleRequest decode_request(ByteView data) {
  ByteReader rd(data);
  OracleRequest r;
  r.id = Hash256::from_view(rd.raw(32));
  r.job_id = rd.str();
  r.requester = Address::from_view(rd.raw(20));
  r.initiator = Address::from_view(rd.raw(20));
  r.sku = rd.str();
  r.field = static_cast<Field>(rd.u8());
  r.callback = rd.str();
  r.fee = LinkAmount::decode(rd);
  r.status = static_cast<RequestStatus>(rd.u8());
  r.close_reason = rd.str();
  r.created_height = rd.u64();
  r.deadline_ms = rd.u64();
  auto n = rd.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    OracleResponse resp;
    resp.node = Address::from_view(rd.raw(20));
    resp.value = rd.i64();
    resp.ok = rd.u8() == 1;
    r.responses.push_back(resp);
  }
  bool has_result = rd.u8() == 1;
  auto result = rd.i64();
  if (has_result) r.result = result;
  r.delivered_at = rd.u64();
  auto p = rd.u32();
  for (std::uint32_t i = 0; i < p; ++i) {
    auto node = Address::from_view(rd.raw(20));
    r.payouts.emplace_back(node, LinkAmount::decode(rd));
  }
  rd.expect_done();
  return r;
}
}  // namespace

std::string_view field_name(Field f) { return kFieldNames[static_cast<std::size_t>(f)]; }
std::string_view field_reading_key(Field f) { return kReadingKeys[static_cast<std::size_t>(f)]; }

std::optional<Field> parse_field(std::string_view s) {
  for (std::size_t i = 0; i < kFieldNames.size(); ++i)
    if (kFieldNames[i] == s || kReadingKeys[i] == s) return static_cast<Field>(i);
  return std::nullopt;
}

bool field_is_signed(Field f) { return f == Field::Latitude || f == Field::Longitude; }

std::int64_t field_scale(Field f) { return field_is_signed(f) ? 1'000'000 : 100; }

std::int64_t scale_reading(Field f, double value) {
  if (!std::isfinite(value)) throw std::out_of_range("reading is not finite");
  double scaled = std::round(value * static_cast<double>(field_scale(f)));
  if (!field_is_signed(f) && scaled < 0) throw std::out_of_range("negative value on unsigned job");
  if (std::fabs(scaled) > 9.0e18) throw std::out_of_range("reading too large");
  return static_cast<std::int64_t>(scaled);
}

double unscale(Field f, std::int64_t value) {
  return static_cast<double>(value) / static_cast<double>(field_scale(f));
}

std::string_view status_name(RequestStatus s) { return kStatusNames[static_cast<std::size_t>(s)]; }

FeeSchedule FeeSchedule::defaults() {
  FeeSchedule s;
  const auto standalone = LinkAmount::parse_tokens("0.1");
  for (auto f : kAllFields) s.per_request[f] = standalone;

  auto spread = [](LinkAmount total) {
    std::vector<std::pair<Field, LinkAmount>> reqs;
    for (auto f : kAllFields) reqs.emplace_back(f, total / 4);
    return reqs;
  };
  const auto high = LinkAmount::parse_tokens("0.5");
  const auto low = LinkAmount::parse_tokens("0.4");
  s.per_action["produceItemByManufacturer"] = spread(high);
  s.per_action["sellItemByManufacturer"] = spread(high);
  for (auto op : {"purchaseItemByDistributor", "shippedItemByManufacturer", "receivedItemByDistributor",
                  "processedItemByDistributor", "packageItemByDistributor", "sellItemByDistributor",
                  "purchaseItemByRetailer", "shippedItemByDistributor", "receivedItemByRetailer",
                  "sellItemByRetailer", "purchaseItemByConsumer"})
    s.per_action[op] = spread(low);
  return s;
}

LinkAmount FeeSchedule::action_total(std::string_view operation) const {
  LinkAmount total;
  if (auto it = per_action.find(std::string(operation)); it != per_action.end())
    for (const auto& [_, fee] : it->second) total += fee;
  return total;
}

bool OracleConfig::is_node(const Address& a) const {
  return std::find(nodes.begin(), nodes.end(), a) != nodes.end();
}

void OracleConfig::encode(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(nodes.size()));
  for (const auto& n : nodes) w.raw(n.view());
  w.u32(quorum);
  w.u64(timeout_ms);
  w.str(unsigned_job_id);
  w.str(signed_job_id);
  w.u32(static_cast<std::uint32_t>(fees.per_request.size()));
  for (const auto& [f, fee] : fees.per_request) {
    w.u8(static_cast<std::uint8_t>(f));
    fee.encode(w);
  }
  w.u32(static_cast<std::uint32_t>(fees.per_action.size()));
  for (const auto& [op, reqs] : fees.per_action) {
    w.str(op);
    w.u32(static_cast<std::uint32_t>(reqs.size()));
    for (const auto& [f, fee] : reqs) {
      w.u8(static_cast<std::uint8_t>(f));
      fee.encode(w);
    }
  }
}

OracleConfig OracleConfig::decode(ByteReader& r) {
  OracleConfig c;
  c.fees = {};
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) c.nodes.push_back(Address::from_view(r.raw(20)));
  c.quorum = r.u32();
  c.timeout_ms = r.u64();
  c.unsigned_job_id = r.str();
  c.signed_job_id = r.str();
  auto pr = r.u32();
  for (std::uint32_t i = 0; i < pr; ++i) {
    auto f = static_cast<Field>(r.u8());
    c.fees.per_request[f] = LinkAmount::decode(r);
  }
  auto pa = r.u32();
  for (std::uint32_t i = 0; i < pa; ++i) {
    auto op = r.str();
    auto k = r.u32();
    auto& reqs = c.fees.per_action[op];
    for (std::uint32_t j = 0; j < k; ++j) {
      auto f = static_cast<Field>(r.u8());
      reqs.emplace_back(f, LinkAmount::decode(r));
    }
  }
  return c;
}

std::int64_t median_value(std::vector<std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

const OracleRequest& OracleBridge::request_data(const Hash256& request_id, const Address& requester,
                                                const Address& initiator, std::string sku, Field field,
                                                LinkAmount fee, std::uint64_t height, std::uint64_t now_ms) {
  if (requests_.contains(request_id)) throw ContractError("DuplicateRequest", "0x" + request_id.hex());
  link_.move_to_escrow(requester, fee);

  OracleRequest req;
  req.id = request_id;
  req.job_id = config_.job_for(field);
  req.requester = requester;
  req.initiator = initiator;
  req.sku = std::move(sku);
  req.field = field;
  req.callback = std::string(kCallbacks[static_cast<std::size_t>(field)]);
  req.fee = fee;
  req.created_height = height;
  req.deadline_ms = now_ms + config_.timeout_ms;
  return requests_.emplace(request_id, std::move(req)).first->second;
}

OracleRequest& OracleBridge::pending_request(const Hash256& id) {
  auto it = requests_.find(id);
  if (it == requests_.end()) throw ContractError("UnknownRequest", "0x" + id.hex());
  switch (it->second.status) {
    case RequestStatus::Pending: return it->second;
    case RequestStatus::Expired: throw ContractError("RequestExpired", "0x" + id.hex());
    default: throw ContractError("AlreadyFulfilled", "0x" + id.hex());
  }
}

void OracleBridge::close(OracleRequest& req, const std::vector<OracleResponse>& responses, std::uint64_t height) {
  std::vector<std::int64_t> ok_values;
  for (const auto& r : responses)
    if (r.ok) ok_values.push_back(r.value);

  req.responses = responses;
  req.delivered_at = height;
  if (ok_values.empty()) {
    req.status = RequestStatus::Failed;
    req.close_reason = "SkuNotFound";
  } else {
    req.status = RequestStatus::Fulfilled;
    req.result = median_value(ok_values);
    // Callback: store the delivered value under (sku, field).
    values_[{req.sku, req.field}] = StoredValue{*req.result, req.id, height};
  }

  const auto n = static_cast<std::uint64_t>(responses.size());
  const auto share = req.fee / n;
  const auto remainder = req.fee % n;
  req.payouts.clear();
  for (std::size_t i = 0; i < responses.size(); ++i) {
    auto amount = i == 0 ? share + remainder : share;
    link_.release_from_escrow(responses[i].node, amount);
    req.payouts.emplace_back(responses[i].node, amount);
  }
}

void OracleBridge::submit_response(const Hash256& request_id, const OracleResponse& response, std::uint64_t height) {
  if (!config_.is_node(response.node)) throw ContractError("NotOracleNode", response.node.str());
  auto& req = pending_request(request_id);
  for (const auto& r : req.responses)
    if (r.node == response.node) throw ContractError("DuplicateResponse", response.node.str());
  if (req.responses.size() + 1 >= config_.quorum) {
    auto all = req.responses;
    all.push_back(response);
    close(req, all, height);
  } else {
    req.responses.push_back(response);
  }
}

void OracleBridge::fulfill(const Hash256& request_id, const OracleResponse& response, std::uint64_t height) {
  if (!config_.is_node(response.node)) throw ContractError("NotOracleNode", response.node.str());
  auto& req = pending_request(request_id);
  close(req, {response}, height);
}

void OracleBridge::aggregate_fulfill(const Hash256& request_id, const std::vector<OracleResponse>& responses,
                                     std::uint64_t height) {
  auto& req = pending_request(request_id);
  std::set<Address> seen;
  for (const auto& r : responses) {
    if (!config_.is_node(r.node)) throw ContractError("NotOracleNode", r.node.str());
    if (!seen.insert(r.node).second) throw ContractError("DuplicateResponse", r.node.str());
  }
  if (responses.empty() || responses.size() < config_.quorum)
    throw ContractError("QuorumNotReached",
                        std::to_string(responses.size()) + " of " + std::to_string(config_.quorum));
  close(req, responses, height);
}

std::vector<Hash256> OracleBridge::expire(std::uint64_t now_ms, std::uint64_t height) {
  std::vector<Hash256> expired;
  for (auto& [id, req] : requests_) {
    if (req.status != RequestStatus::Pending || req.deadline_ms > now_ms) continue;
    link_.release_from_escrow(req.requester, req.fee);
    req.status = RequestStatus::Expired;
    req.close_reason = "QuorumNotReached";
    req.delivered_at = height;
    expired.push_back(id);
  }
  return expired;
}

const OracleRequest* OracleBridge::find(const Hash256& id) const {
  auto it = requests_.find(id);
  return it == requests_.end() ? nullptr : &it->second;
}

std::vector<const OracleRequest*> OracleBridge::pending() const {
  std::vector<const OracleRequest*> out;
  for (const auto& [_, req] : requests_)
    if (req.status == RequestStatus::Pending) out.push_back(&req);
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return std::tie(a->created_height, a->id) < std::tie(b->created_height, b->id);
  });
  return out;
}

const StoredValue* OracleBridge::value(const std::string& sku, Field f) const {
  auto it = values_.find({sku, f});
  return it == values_.end() ? nullptr : &it->second;
}

void OracleBridge::export_to(ledger::KvMap& kv) const {
  ByteWriter cfg;
  config_.encode(cfg);
  kv["oracle/config"] = cfg.take();

  for (const auto& [holder, amount] : link_.balances()) {
    ByteWriter w;
    amount.encode(w);
    kv[std::string(kBalancePrefix) + holder.str()] = w.take();
  }
  ByteWriter esc;
  link_.escrow().encode(esc);
  kv[std::string(kEscrowKey)] = esc.take();

  for (const auto& [id, req] : requests_) kv[std::string(kRequestPrefix) + id.hex()] = encode_request(req);
  for (const auto& [key, v] : values_) {
    ByteWriter w;
    w.i64(v.value);
    w.raw(v.request_id.view());
    w.u64(v.block_height);
    kv[std::string(kValuePrefix) + key.first + "/" + std::string(field_name(key.second))] = w.take();
  }
}

void OracleBridge::import_from(const ledger::KvMap& kv) {
  *this = OracleBridge();
  if (auto it = kv.find("oracle/config"); it != kv.end()) {
    ByteReader r(it->second);
    config_ = OracleConfig::decode(r);
  }
  std::map<Address, LinkAmount> balances;
  for (auto it = kv.lower_bound(std::string(kBalancePrefix)); it != kv.end() && it->first.starts_with(kBalancePrefix);
       ++it) {
    ByteReader r(it->second);
    balances[Address::parse(it->first.substr(kBalancePrefix.size()))] = LinkAmount::decode(r);
  }
  LinkAmount escrow;
  if (auto it = kv.find(std::string(kEscrowKey)); it != kv.end()) {
    ByteReader r(it->second);
    escrow = LinkAmount::decode(r);
  }
  link_ = LinkLedger::restore(std::move(balances), escrow);
  for (auto it = kv.lower_bound(std::string(kRequestPrefix)); it != kv.end() && it->first.starts_with(kRequestPrefix);
       ++it) {
    auto req = decode_request(it->second);
    requests_.emplace(req.id, std::move(req));
  }
  for (auto it = kv.lower_bound(std::string(kValuePrefix)); it != kv.end() && it->first.starts_with(kValuePrefix);
       ++it) {
    auto rest = it->first.substr(kValuePrefix.size());
    auto slash = rest.rfind('/');
    auto field = parse_field(rest.substr(slash + 1));
    if (!field) throw DecodeError("bad oracle value key " + it->first);
    ByteReader r(it->second);
    StoredValue v;
    v.value = r.i64();
    v.request_id = Hash256::from_view(r.raw(32));
    v.block_height = r.u64();
    values_[{rest.substr(0, slash), *field}] = v;
  }
}

}  // namespace pharmachain::oracle
