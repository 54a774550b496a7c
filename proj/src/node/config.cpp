#include "pharmachain/node/config.hpp"

#include <fstream>

namespace pharmachain::node {

namespace {
using nlohmann::json;

json fees_to_json(const oracle::FeeSchedule& f) {
  json per_request = json::object();
  for (const auto& [field, fee] : f.per_request) per_request[std::string(oracle::field_name(field))] = fee.tokens_string();
  json per_action = json::object();
  for (const auto& [op, reqs] : f.per_action) {
    json r = json::object();
    for (const auto& [field, fee] : reqs) r[std::string(oracle::field_name(field))] = fee.tokens_string();
    per_action[op] = r;
  }
  return {{"per_request", per_request}, {"per_action", per_action}};
}

oracle::Field field_of(const std::string& name) {
  auto f = oracle::parse_field(name);
  if (!f) throw std::invalid_argument("unknown oracle field " + name);
  return *f;
}

// Entries present in j replace the defaults; the rest stay.
oracle::FeeSchedule fees_from_json(const json& j) {
  auto f = oracle::FeeSchedule::defaults();
  if (j.contains("per_request"))
    for (auto& [name, fee] : j["per_request"].items())
      f.per_request[field_of(name)] = oracle::LinkAmount::parse_tokens(fee.get<std::string>());
  if (j.contains("per_action"))
    for (auto& [op, reqs] : j["per_action"].items()) {
      if (!supply::find_lifecycle_step(op)) throw std::invalid_argument("fees for unknown action " + op);
      auto& list = f.per_action[op];
      list.clear();
      for (auto& [name, fee] : reqs.items())
        list.emplace_back(field_of(name), oracle::LinkAmount::parse_tokens(fee.get<std::string>()));
    }
  return f;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// An account name from the keystore, or a literal address for parties whose keys live elsewhere.
Address resolve_address(const Keystore& keys, const std::string& s) {
  if (const auto* a = keys.find(s)) return a->address();
  if (s.starts_with("0x")) return Address::parse(s);
  return keys.get(s).address();
}

void read_path(const json& j, const char* key, std::filesystem::path& out) {
  if (j.contains(key)) out = j.at(key).get<std::string>();
}
}  // namespace

json NodeConfig::to_json() const {
  json gw = {{"host", gateway.host},
             {"port", gateway.port},
             {"recipients", gateway.recipients},
             {"data_dir", gateway.data_dir.string()},
             {"outbox", gateway.outbox.string()},
             {"nodes_file", gateway.nodes_file.string()}};
  if (gateway.rules_file) gw["rules_file"] = gateway.rules_file->string();
  return {{"data_dir", data_dir.string()},
          {"keystore", keystore.string()},
          {"node", {{"host", host}, {"port", port}}},
          {"validators", validators},
          {"owner", owner},
          {"block_intervals_ms", block_intervals_ms},
          {"genesis_timestamp_ms", genesis_timestamp_ms},
          {"initial_link", initial_link},
          {"fees", fees_to_json(fees)},
          {"oracle",
           {{"nodes", oracle.nodes},
            {"quorum", oracle.quorum},
            {"timeout_ms", oracle.timeout_ms},
            {"poll_interval_ms", oracle.poll_interval_ms},
            {"gateway_url", oracle.gateway_url}}},
          {"gateway", gw},
          {"broker", {{"host", broker.host}, {"port", broker.port}, {"topic", broker.topic}}}};
}

NodeConfig NodeConfig::from_json(const json& j, std::filesystem::path base_dir) {
  NodeConfig c;
  c.base_dir = std::move(base_dir);
  read_path(j, "data_dir", c.data_dir);
  read_path(j, "keystore", c.keystore);
  if (j.contains("node")) {
    read(j["node"], "host", c.host);
    read(j["node"], "port", c.port);
  }
  read(j, "validators", c.validators);
  read(j, "owner", c.owner);
  if (j.contains("block_interval_ms")) c.block_intervals_ms = {j["block_interval_ms"].get<std::uint64_t>()};
  read(j, "block_intervals_ms", c.block_intervals_ms);
  read(j, "genesis_timestamp_ms", c.genesis_timestamp_ms);
  read(j, "initial_link", c.initial_link);
  if (j.contains("fees")) c.fees = fees_from_json(j["fees"]);
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    read(o, "nodes", c.oracle.nodes);
    read(o, "quorum", c.oracle.quorum);
    read(o, "timeout_ms", c.oracle.timeout_ms);
    read(o, "poll_interval_ms", c.oracle.poll_interval_ms);
    read(o, "gateway_url", c.oracle.gateway_url);
  }
  if (j.contains("gateway")) {
    const auto& g = j["gateway"];
    read(g, "host", c.gateway.host);
    read(g, "port", c.gateway.port);
    read(g, "recipients", c.gateway.recipients);
    read_path(g, "data_dir", c.gateway.data_dir);
    read_path(g, "outbox", c.gateway.outbox);
    read_path(g, "nodes_file", c.gateway.nodes_file);
    if (g.contains("rules_file")) c.gateway.rules_file = g["rules_file"].get<std::string>();
  }
  if (j.contains("broker")) {
    const auto& b = j["broker"];
    read(b, "host", c.broker.host);
    read(b, "port", c.broker.port);
    read(b, "topic", c.broker.topic);
  }
  if (c.validators.empty()) throw std::invalid_argument("at least one validator is required");
  if (c.block_intervals_ms.empty()) throw std::invalid_argument("block_intervals_ms must not be empty");
  if (c.oracle.quorum == 0 || c.oracle.quorum > c.oracle.nodes.size())
    throw std::invalid_argument("oracle quorum must be between 1 and the number of oracle nodes");
  return c;
}

NodeConfig NodeConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return from_json(json::parse(in), dir);
}

void NodeConfig::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
  out << to_json().dump(2) << '\n';
}

ledger::ValidatorSet NodeConfig::validator_set(const Keystore& keys) const {
  std::vector<ledger::ValidatorInfo> list;
  for (const auto& name : validators) list.push_back({name, keys.get(name).key().public_key()});
  return ledger::ValidatorSet(std::move(list));
}

supply::GenesisConfig NodeConfig::genesis(const Keystore& keys) const {
  supply::GenesisConfig g;
  g.owner = resolve_address(keys, owner);
  g.initial_link = oracle::LinkAmount::parse_tokens(initial_link);
  for (const auto& n : oracle.nodes) g.oracle.nodes.push_back(resolve_address(keys, n));
  g.oracle.quorum = oracle.quorum;
  g.oracle.timeout_ms = oracle.timeout_ms;
  g.oracle.fees = fees;
  return g;
}

}  // namespace pharmachain::node
