#include "pharmachain/node/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "pharmachain/contract_error.hpp"
#include "pharmachain/supply/provenance.hpp"

namespace pharmachain::node {

namespace {
using nlohmann::json;

struct BadRequest : std::runtime_error {
  BadRequest(std::string code, const std::string& msg) : std::runtime_error(msg), code(std::move(code)) {}
  std::string code;
};

Response error(int status, const std::string& code, const std::string& message, json extra = json::object()) {
  extra["error"] = code;
  extra["message"] = message;
  return {status, extra};
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw BadRequest("BadRequest", "invalid " + what);
  return v;
}

std::int64_t parse_i64(std::string_view s, const std::string& what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw BadRequest("BadRequest", "invalid " + what);
  return v;
}

Hash256 parse_hash(std::string_view s) {
  if (s.starts_with("0x")) s.remove_prefix(2);
  try {
    return Hash256::from_hex_string(s);
  } catch (const std::exception&) {
    throw BadRequest("BadRequest", "invalid 32-byte hash");
  }
}

json opt_address(const std::optional<Address>& a) { return a ? json(a->str()) : json(nullptr); }

json block_json(const ledger::Block& b) {
  json txs = json::array();
  for (const auto& tx : b.transactions) {
    json args = json::array();
    for (const auto& a : tx.args) args.push_back(ledger::value_to_string(a));
    txs.push_back({{"id", "0x" + tx.id().hex()},
                   {"sender", tx.sender.str()},
                   {"nonce", tx.nonce},
                   {"operation", tx.operation},
                   {"args", args}});
  }
  json receipts = json::array();
  for (const auto& r : b.receipts) receipts.push_back(receipt_json(r));
  json events = json::array();
  for (const auto& e : b.events) events.push_back(event_json(e));
  return {{"height", b.height},
          {"hash", "0x" + b.block_hash.hex()},
          {"parent_hash", "0x" + b.parent_hash.hex()},
          {"timestamp", b.timestamp_ms},
          {"validator", b.validator.str()},
          {"state_root", "0x" + b.state_root.hex()},
          {"transactions", txs},
          {"receipts", receipts},
          {"events", events}};
}

json roles_json(const access::RoleRegistry& roles, const Address& a) {
  json list = json::array();
  for (auto r : access::kAllRoles)
    if (roles.has(r, a)) list.push_back(std::string(access::role_name(r)));
  return {{"address", a.str()}, {"owner", roles.is_owner(a)}, {"roles", list}};
}

json link_json(oracle::LinkAmount a) { return {{"tokens", a.tokens_string()}, {"base_units", a.base_units_string()}}; }

ledger::Value convert(const supply::ParamSpec& p, const json& v, const Keystore& keys) {
  auto fail = [&] {
    return BadRequest("BadArguments",
                      "parameter " + std::string(p.name) + " expects " + std::string(supply::param_type_name(p.type)));
  };
  switch (p.type) {
    case supply::ParamType::U64:
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_string()) return parse_u64(v.get<std::string>(), std::string(p.name));
      throw fail();
    case supply::ParamType::I64:
      if (v.is_number_integer()) return v.get<std::int64_t>();
      if (v.is_string()) return parse_i64(v.get<std::string>(), std::string(p.name));
      throw fail();
    case supply::ParamType::String:
      if (v.is_string()) return v.get<std::string>();
      throw fail();
    case supply::ParamType::Address: {
      if (!v.is_string()) throw fail();
      auto s = v.get<std::string>();
      if (s.starts_with("0x")) {
        try {
          return Address::parse(s);
        } catch (const std::exception&) {
          throw fail();
        }
      }
      // an account name from the node's keystore
      if (const auto* acc = keys.find(s)) return acc->address();
      throw BadRequest("BadArguments", "unknown account " + s + " for parameter " + std::string(p.name));
    }
    case supply::ParamType::Hash:
      if (!v.is_string()) throw fail();
      try {
        return parse_hash(v.get<std::string>());
      } catch (const BadRequest&) {
        throw fail();
      }
    case supply::ParamType::Bool:
      if (v.is_boolean()) return v.get<bool>();
      if (v == "true") return true;
      if (v == "false") return false;
      throw fail();
  }
  throw fail();
}

ledger::Args parse_args(const supply::OperationSpec& spec, const json& args, const Keystore& keys) {
  ledger::Args out;
  if (args.is_null()) {
    if (!spec.params.empty()) throw BadRequest("BadArguments", "missing args");
    return out;
  }
  if (args.is_array()) {
    if (args.size() != spec.params.size())
      throw BadRequest("BadArguments", std::string(spec.name) + " takes " + std::to_string(spec.params.size()) +
                                           " arguments");
    for (std::size_t i = 0; i < args.size(); ++i) out.push_back(convert(spec.params[i], args[i], keys));
    return out;
  }
  if (!args.is_object()) throw BadRequest("BadArguments", "args must be an array or object");
  for (const auto& p : spec.params) {
    auto it = args.find(std::string(p.name));
    if (it == args.end()) throw BadRequest("BadArguments", "missing argument " + std::string(p.name));
    out.push_back(convert(p, *it, keys));
  }
  if (args.size() != spec.params.size()) throw BadRequest("BadArguments", "unexpected argument");
  return out;
}

std::chrono::milliseconds wait_of(const json& body) {
  if (!body.contains("wait_ms")) return std::chrono::seconds(30);
  if (!body["wait_ms"].is_number_unsigned()) throw BadRequest("BadRequest", "wait_ms must be a non-negative integer");
  return std::chrono::milliseconds(body["wait_ms"].get<std::uint64_t>());
}

Response tx_response(const TxResult& r) {
  json events = json::array();
  for (const auto& e : r.events) events.push_back(event_json(e));
  json body = {{"tx_id", "0x" + r.tx_id.hex()}};
  if (!r.included) {
    body["status"] = "pending";
    return {202, body};
  }
  body["status"] = r.receipt.success ? "success" : "failed";
  body["block_height"] = r.block_height;
  body["receipt"] = receipt_json(r.receipt);
  body["events"] = events;
  if (r.receipt.success) return {200, body};
  body["error"] = r.receipt.error;
  body["kind"] = r.receipt.detail;
  body["message"] = r.receipt.detail.empty() ? r.receipt.error : r.receipt.error + ": " + r.receipt.detail;
  return {status_for_error(r.receipt.error), body};
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out.push_back(static_cast<char>(v));
        i += 2;
      } else {
        out.push_back('%');
      }
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}
}  // namespace

Query parse_query(std::string_view text) {
  Query q;
  while (!text.empty()) {
    auto amp = text.find('&');
    auto part = text.substr(0, amp);
    auto eq = part.find('=');
    if (!part.empty())
      q[url_decode(part.substr(0, eq))] = eq == std::string_view::npos ? "" : url_decode(part.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    text.remove_prefix(amp + 1);
  }
  return q;
}

json item_json(const supply::ShipmentItem& item) {
  json history = json::array();
  for (const auto& h : item.history)
    history.push_back({{"event", h.event},
                       {"block_height", h.block_height},
                       {"tx_id", "0x" + h.tx_id.hex()},
                       {"timestamp", h.timestamp_ms},
                       {"prior_owner", h.prior_owner.str()},
                       {"new_owner", h.new_owner.str()}});
  return {{"upc", item.upc},
          {"sku", item.sku},
          {"drugName", item.drug_name},
          {"state", supply::value_of(item.state)},
          {"stateName", std::string(supply::name_of(item.state))},
          {"owner", item.owner.str()},
          {"originManufacturer", item.origin_manufacturer.str()},
          {"distributor", opt_address(item.distributor)},
          {"retailer", opt_address(item.retailer)},
          {"consumer", opt_address(item.consumer)},
          {"history", history}};
}

json event_json(const ledger::EventRecord& e) {
  return {{"name", e.name}, {"upc", e.upc}, {"block_height", e.block_height}, {"tx_id", "0x" + e.tx_id.hex()}};
}

json receipt_json(const ledger::Receipt& r) {
  return {{"tx_id", "0x" + r.tx_id.hex()},
          {"success", r.success},
          {"error", r.error},
          {"detail", r.detail},
          {"result", r.result}};
}

json request_json(const oracle::OracleRequest& r) {
  json responses = json::array();
  for (const auto& x : r.responses) responses.push_back({{"node", x.node.str()}, {"value", x.value}, {"ok", x.ok}});
  json payouts = json::array();
  for (const auto& [node, amount] : r.payouts) payouts.push_back({{"node", node.str()}, {"amount", link_json(amount)}});
  json j = {{"id", "0x" + r.id.hex()},
            {"job_id", r.job_id},
            {"requester", r.requester.str()},
            {"initiator", r.initiator.str()},
            {"sku", r.sku},
            {"field", std::string(oracle::field_name(r.field))},
            {"callback", r.callback},
            {"fee", link_json(r.fee)},
            {"status", std::string(oracle::status_name(r.status))},
            {"close_reason", r.close_reason},
            {"created_height", r.created_height},
            {"deadline", r.deadline_ms},
            {"responses", responses},
            {"result", nullptr},
            {"value", nullptr},
            {"delivered_at", r.delivered_at},
            {"payouts", payouts}};
  if (r.result) {
    j["result"] = *r.result;
    j["value"] = oracle::unscale(r.field, *r.result);
  }
  return j;
}

int status_for_error(const std::string& code) {
  if (code == "UnknownUPC" || code == "UnknownRequest") return 404;
  if (code == "BadArguments" || code == "UnknownOperation" || code == "UnknownField") return 400;
  return 409;
}

Response Service::handle(std::string_view method, std::string_view path, const Query& query, std::string_view body) {
  try {
    auto seg = segments(path);
    json payload;
    if (!body.empty()) {
      try {
        payload = json::parse(body);
      } catch (const json::exception& e) {
        return error(400, "BadRequest", std::string("invalid JSON body: ") + e.what());
      }
    }
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto& ledger = node_.ledger();

    if (seg.size() == 1 && seg[0] == "status" && get) {
      return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                json validators = json::array();
                for (const auto& v : ledger.validators().members())
                  validators.push_back({{"name", v.name}, {"address", v.address().str()}});
                return json{{"height", ledger.tip_height()},
                            {"tip_hash", "0x" + ledger.block(ledger.tip_height()).block_hash.hex()},
                            {"tip_timestamp", ledger.tip_timestamp()},
                            {"mempool", ledger.mempool_size()},
                            {"validators", validators},
                            {"block_intervals_ms", node_.schedule().intervals()},
                            {"owner", c.roles().owner().str()},
                            {"contract_account", c.genesis().contract_account.str()},
                            {"contract_link", link_json(c.oracle().link().balance(c.genesis().contract_account))},
                            {"items", c.items().size()}};
              })};
    }

    if (seg.size() == 1 && seg[0] == "operations" && get) {
      json ops = json::array();
      for (const auto& op : supply::operation_catalog()) {
        json params = json::array();
        for (const auto& p : op.params)
          params.push_back({{"name", std::string(p.name)}, {"type", std::string(supply::param_type_name(p.type))}});
        ops.push_back({{"name", std::string(op.name)}, {"params", params}});
      }
      return {200, ops};
    }

    if (!seg.empty() && seg[0] == "accounts") {
      if (seg.size() == 1 && get) {
        auto keys = node_.keystore();
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                  json list = json::array();
                  for (const auto& a : keys.accounts()) {
                    auto j = roles_json(c.roles(), a.address());
                    j["name"] = a.name;
                    list.push_back(j);
                  }
                  return list;
                })};
      }
      if (seg.size() == 1 && post) {
        if (!payload.is_object() || !payload.contains("name") || !payload["name"].is_string())
          return error(400, "BadRequest", "body must be {\"name\": string}");
        try {
          const auto& a = node_.add_account(payload["name"].get<std::string>());
          return {201, {{"name", a.name}, {"address", a.address().str()}}};
        } catch (const std::invalid_argument& e) {
          return error(409, "AccountExists", e.what());
        }
      }
      if (seg.size() == 3 && seg[2] == "nonce" && get) {
        auto keys = node_.keystore();
        Address a;
        if (const auto* acc = keys.find(seg[1])) {
          a = acc->address();
        } else {
          try {
            a = Address::parse(seg[1]);
          } catch (const std::exception&) {
            return error(400, "BadRequest", "invalid address");
          }
        }
        return {200, {{"address", a.str()}, {"confirmed", ledger.confirmed_nonce(a)}, {"next", ledger.next_nonce(a)}}};
      }
    }

    if (!seg.empty() && seg[0] == "tx" && post) {
      if (seg.size() == 2 && seg[1] == "raw") return submit_raw(payload);
      if (seg.size() == 2) return submit(seg[1], payload);
    }

    if (!seg.empty() && seg[0] == "items" && get) {
      if (seg.size() == 1) {
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                  json list = json::array();
                  for (const auto& [upc, item] : c.items()) {
                    auto j = item_json(item);
                    j.erase("history");
                    list.push_back(j);
                  }
                  return list;
                })};
      }
      auto upc = parse_u64(seg[1], "upc");
      auto item = node_.with_contract([&](const supply::SupplyChainContract& c) -> std::optional<supply::ShipmentItem> {
        if (const auto* i = c.find_item(upc)) return *i;
        return std::nullopt;
      });
      if (!item) return error(404, "UnknownUPC", "no item with upc " + std::to_string(upc));
      if (seg.size() == 2) return {200, item_json(*item)};
      if (seg.size() == 3 && seg[2] == "provenance") {
        auto report = supply::verify_authenticity(ledger, *item);
        json custody = json::array();
        for (const auto& l : report.custody_chain)
          custody.push_back({{"role", std::string(access::role_name(l.role))},
                             {"party", l.party.str()},
                             {"block_height", l.block_height},
                             {"tx_id", "0x" + l.tx_id.hex()},
                             {"event", l.event}});
        json telemetry = node_.with_contract([&](const supply::SupplyChainContract& c) {
          json t = json::object();
          for (auto f : oracle::kAllFields) {
            const auto* v = c.oracle().value(item->sku, f);
            if (!v) continue;
            t[std::string(oracle::field_name(f))] = {{"value", oracle::unscale(f, v->value)},
                                                     {"raw", v->value},
                                                     {"request_id", "0x" + v->request_id.hex()},
                                                     {"block_height", v->block_height}};
          }
          return t;
        });
        return {200,
                {{"upc", upc},
                 {"sku", item->sku},
                 {"drugName", item->drug_name},
                 {"authentic", report.authentic},
                 {"verdict", report.authentic ? "authentic" : "counterfeit-risk"},
                 {"state", supply::value_of(report.state)},
                 {"stateName", std::string(supply::name_of(report.state))},
                 {"custody", custody},
                 {"history", item_json(*item)["history"]},
                 {"anomalies", report.anomalies},
                 {"failing_height", report.failing_height ? json(*report.failing_height) : json(nullptr)},
                 {"telemetry", telemetry}}};
      }
    }

    if (!seg.empty() && seg[0] == "roles" && get) {
      if (seg.size() == 1) {
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                  json j = {{"owner", c.roles().owner().str()}};
                  for (auto r : access::kAllRoles) {
                    json members = json::array();
                    for (const auto& m : c.roles().members(r)) members.push_back(m.str());
                    j[std::string(access::role_name(r))] = members;
                  }
                  return j;
                })};
      }
      if (seg.size() == 2) {
        Address a;
        auto keys = node_.keystore();
        if (const auto* acc = keys.find(seg[1])) {
          a = acc->address();
        } else {
          try {
            a = Address::parse(seg[1]);
          } catch (const std::exception&) {
            return error(400, "BadRequest", "invalid address");
          }
        }
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) { return roles_json(c.roles(), a); })};
      }
    }

    if (seg.size() == 2 && seg[0] == "link" && get) {
      Address a;
      try {
        a = Address::parse(seg[1]);
      } catch (const std::exception&) {
        return error(400, "BadRequest", "invalid address");
      }
      return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                auto j = link_json(c.oracle().link().balance(a));
                j["address"] = a.str();
                return j;
              })};
    }

    if (seg.size() == 2 && seg[0] == "chain" && seg[1] == "verify" && get) {
      auto v = ledger.verify_chain();
      return {200,
              {{"ok", v.ok},
               {"height", ledger.tip_height()},
               {"first_bad_height", v.first_bad_height ? json(*v.first_bad_height) : json(nullptr)},
               {"reason", v.reason}}};
    }

    if (seg.size() == 2 && seg[0] == "blocks" && get) {
      auto h = seg[1] == "latest" ? ledger.tip_height() : parse_u64(seg[1], "height");
      if (h > ledger.tip_height()) return error(404, "UnknownBlock", "no block at height " + std::to_string(h));
      return {200, block_json(ledger.block(h))};
    }

    if (seg.size() == 1 && seg[0] == "events" && get) {
      std::vector<ledger::EventRecord> events;
      if (auto it = query.find("upc"); it != query.end())
        events = ledger.events_for_upc(parse_u64(it->second, "upc"));
      else
        events = ledger.all_events();
      std::uint64_t since = 0;
      if (auto it = query.find("since"); it != query.end()) since = parse_u64(it->second, "since");
      json list = json::array();
      for (const auto& e : events)
        if (e.block_height >= since) list.push_back(event_json(e));
      return {200, list};
    }

    if (!seg.empty() && seg[0] == "oracle" && get) {
      if (seg.size() == 2 && seg[1] == "requests") {
        std::string status = query.contains("status") ? query.at("status") : "";
        std::transform(status.begin(), status.end(), status.begin(), [](unsigned char c) { return std::tolower(c); });
        auto sku = query.contains("sku") ? query.at("sku") : "";
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                  json list = json::array();
                  for (const auto& [id, r] : c.oracle().requests()) {
                    if (!status.empty() && oracle::status_name(r.status) != status) continue;
                    if (!sku.empty() && r.sku != sku) continue;
                    list.push_back(request_json(r));
                  }
                  return list;
                })};
      }
      if (seg.size() == 3 && seg[1] == "requests") {
        auto id = parse_hash(seg[2]);
        auto found = node_.with_contract([&](const supply::SupplyChainContract& c) -> json {
          const auto* r = c.oracle().find(id);
          return r ? request_json(*r) : json(nullptr);
        });
        if (found.is_null()) return error(404, "UnknownRequest", "no oracle request " + seg[2]);
        return {200, found};
      }
      if (seg.size() == 2 && seg[1] == "values") {
        return {200, node_.with_contract([&](const supply::SupplyChainContract& c) {
                  json list = json::array();
                  for (const auto& [key, v] : c.oracle().values())
                    list.push_back({{"sku", key.first},
                                    {"field", std::string(oracle::field_name(key.second))},
                                    {"raw", v.value},
                                    {"value", oracle::unscale(key.second, v.value)},
                                    {"request_id", "0x" + v.request_id.hex()},
                                    {"block_height", v.block_height}});
                  return list;
                })};
      }
    }

    return error(404, "NotFound", std::string(method) + " " + std::string(path) + " is not a route");
  } catch (const BadRequest& e) {
    return error(400, e.code, e.what());
  } catch (const ledger::LedgerError& e) {
    return error(e.code() == "ChainCorrupt" ? 500 : 400, e.code(), e.what());
  } catch (const ContractError& e) {
    return error(status_for_error(e.code()), e.code(), e.what(), {{"kind", e.detail()}});
  } catch (const std::exception& e) {
    return error(500, "InternalError", e.what());
  }
}

Response Service::submit(const std::string& operation, const json& body) {
  const auto* spec = supply::find_operation(operation);
  if (!spec) return error(400, "UnknownOperation", "no operation named " + operation);
  if (!body.is_object() || !body.contains("account") || !body["account"].is_string())
    return error(400, "BadRequest", "body must carry \"account\"");
  auto keys = node_.keystore();
  auto account = body["account"].get<std::string>();
  if (!keys.find(account)) return error(401, "UnknownAccount", "no account " + account + " in the node keystore");
  auto args = parse_args(*spec, body.contains("args") ? body["args"] : json(nullptr), keys);
  return tx_response(node_.submit(account, operation, std::move(args), wait_of(body)));
}

Response Service::submit_raw(const json& body) {
  if (!body.is_object() || !body.contains("tx") || !body["tx"].is_string())
    return error(400, "BadRequest", "body must be {\"tx\": hex}");
  ledger::Transaction tx;
  try {
    tx = ledger::Transaction::decode(from_hex(body["tx"].get<std::string>()));
  } catch (const std::exception& e) {
    return error(400, "BadRequest", std::string("undecodable transaction: ") + e.what());
  }
  return tx_response(node_.submit_signed(std::move(tx), wait_of(body)));
}

Response LocalTransport::call(std::string_view method, std::string_view target, const nlohmann::json& body) {
  auto q = target.find('?');
  auto path = target.substr(0, q);
  Query query = q == std::string_view::npos ? Query{} : parse_query(target.substr(q + 1));
  return service_.handle(method, path, query, body.is_null() ? std::string() : body.dump());
}

}  // namespace pharmachain::node
