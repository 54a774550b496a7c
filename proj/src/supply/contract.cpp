#include "pharmachain/supply/contract.hpp"

#include <cstdio>

#include "pharmachain/contract_error.hpp"

namespace pharmachain::supply {

namespace {
constexpr std::string_view kGenesisKey = "config/genesis";
constexpr std::string_view kItemPrefix = "item/";

std::string item_key(std::uint64_t upc) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%020llu", static_cast<unsigned long long>(upc));
  return std::string(kItemPrefix) + buf;
}

void write_optional(ByteWriter& w, const std::optional<Address>& a) {
  w.u8(a ? 1 : 0);
  if (a) w.raw(a->view());
}

std::optional<Address> read_optional(ByteReader& r) {
  if (r.u8() == 0) return std::nullopt;
  return Address::from_view(r.raw(20));
}

template <typename T>
const T& arg(const ledger::Args& args, std::size_t i) {
  return std::get<T>(args[i]);
}
}  // namespace

Address default_contract_account() { return Address::from_view(sha256("pharmachain/contract").view().last(20)); }

Hash256 oracle_request_id(const Hash256& tx_id, std::uint32_t index) {
  ByteWriter w;
  w.str("oracle-request");
  w.raw(tx_id.view());
  w.u32(index);
  return sha256(w.bytes());
}

Bytes GenesisConfig::encode() const {
  ByteWriter w;
  w.raw(owner.view());
  w.raw(contract_account.view());
  initial_link.encode(w);
  oracle.encode(w);
  return w.take();
}

GenesisConfig GenesisConfig::decode(ByteView data) {
  ByteReader r(data);
  GenesisConfig g;
  g.owner = Address::from_view(r.raw(20));
  g.contract_account = Address::from_view(r.raw(20));
  g.initial_link = oracle::LinkAmount::decode(r);
  g.oracle = oracle::OracleConfig::decode(r);
  r.expect_done();
  return g;
}

Bytes ShipmentItem::encode() const {
  ByteWriter w;
  w.u64(upc);
  w.str(sku);
  w.str(drug_name);
  w.u8(value_of(state));
  w.raw(owner.view());
  w.raw(origin_manufacturer.view());
  write_optional(w, distributor);
  write_optional(w, retailer);
  write_optional(w, consumer);
  w.u32(static_cast<std::uint32_t>(history.size()));
  for (const auto& h : history) {
    w.str(h.event);
    w.u64(h.block_height);
    w.raw(h.tx_id.view());
    w.u64(h.timestamp_ms);
    w.raw(h.prior_owner.view());
    w.raw(h.new_owner.view());
  }
  return w.take();
}

ShipmentItem ShipmentItem::decode(ByteView data) {
  ByteReader r(data);
  ShipmentItem it;
  it.upc = r.u64();
  it.sku = r.str();
  it.drug_name = r.str();
  auto s = state_from_value(r.u8());
  if (!s) throw DecodeError("bad shipment state");
  it.state = *s;
  it.owner = Address::from_view(r.raw(20));
  it.origin_manufacturer = Address::from_view(r.raw(20));
  it.distributor = read_optional(r);
  it.retailer = read_optional(r);
  it.consumer = read_optional(r);
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    HistoryEntry h;
    h.event = r.str();
    h.block_height = r.u64();
    h.tx_id = Hash256::from_view(r.raw(32));
    h.timestamp_ms = r.u64();
    h.prior_owner = Address::from_view(r.raw(20));
    h.new_owner = Address::from_view(r.raw(20));
    it.history.push_back(std::move(h));
  }
  r.expect_done();
  return it;
}

SupplyChainContract::SupplyChainContract(GenesisConfig genesis)
    : genesis_(std::move(genesis)), roles_(genesis_.owner), oracle_(genesis_.oracle) {
  oracle_.link().mint(genesis_.contract_account, genesis_.initial_link);
}

bool SupplyChainContract::knows_operation(std::string_view name) const { return find_operation(name) != nullptr; }

void SupplyChainContract::begin_block(const ledger::BlockContext& ctx) { oracle_.expire(ctx.timestamp_ms, ctx.height); }

ledger::TxOutcome SupplyChainContract::apply(const ledger::Transaction& tx, const ledger::TxContext& ctx) {
  ledger::TxOutcome out;
  Events events;
  try {
    out.result = dispatch(tx, ctx, events);
    out.success = true;
    out.events = std::move(events);
  } catch (const ContractError& e) {
    out.success = false;
    out.error = e.code();
    out.detail = e.detail();
  }
  return out;
}

std::string SupplyChainContract::dispatch(const ledger::Transaction& tx, const ledger::TxContext& ctx,
                                          Events& events) {
  const auto* spec = find_operation(tx.operation);
  if (!spec) throw ContractError("UnknownOperation", tx.operation);
  if (!args_match(*spec, tx.args)) throw ContractError("BadArguments", "arguments do not match " + tx.operation);
  const auto& caller = ctx.caller;

  switch (spec->kind) {
    case OperationKind::Lifecycle:
      return run_lifecycle(*find_lifecycle_step(spec->name), tx.args, ctx, events);

    case OperationKind::RoleAdmin: {
      for (auto r : access::kAllRoles) {
        auto title = std::string(access::role_title(r));
        if (spec->name == "add" + title) {
          roles_.add(r, caller, arg<Address>(tx.args, 0));
          return arg<Address>(tx.args, 0).str();
        }
        if (spec->name == "renounce" + title) {
          roles_.renounce(r, caller);
          return caller.str();
        }
      }
      break;
    }

    case OperationKind::Ownership:
      roles_.transfer_ownership(caller, arg<Address>(tx.args, 0));
      return arg<Address>(tx.args, 0).str();

    case OperationKind::Oracle: {
      if (spec->name == "fulfillOracleRequest") {
        oracle::OracleResponse resp{caller, arg<std::int64_t>(tx.args, 1), arg<bool>(tx.args, 2)};
        const auto& id = arg<Hash256>(tx.args, 0);
        oracle_.submit_response(id, resp, ctx.block.height);
        return std::string(oracle::status_name(oracle_.find(id)->status));
      }
      for (const auto& r : kRequestOperations) {
        if (spec->name != r.operation) continue;
        auto field = oracle::parse_field(r.field);
        if (!field) throw ContractError("UnknownField", std::string(r.field));
        return request(arg<std::string>(tx.args, 0), *field, ctx);
      }
      break;
    }
  }
  throw ContractError("UnknownOperation", tx.operation);
}

std::string SupplyChainContract::request(const std::string& sku, oracle::Field field, const ledger::TxContext& ctx) {
  if (sku.empty()) throw ContractError("BadArguments", "empty sku");
  auto fee_it = genesis_.oracle.fees.per_request.find(field);
  if (fee_it == genesis_.oracle.fees.per_request.end())
    throw ContractError("UnknownField", std::string(oracle::field_name(field)));
  auto id = oracle_request_id(ctx.tx_id, 0);
  oracle_.request_data(id, genesis_.contract_account, ctx.caller, sku, field, fee_it->second, ctx.block.height,
                       ctx.block.timestamp_ms);
  return "0x" + id.hex();
}

std::string SupplyChainContract::run_lifecycle(const LifecycleStep& step, const ledger::Args& args,
                                        const ledger::TxContext& ctx, Events& events) {
  const auto& caller = ctx.caller;
  access::require(access::only_role(roles_, step.role, caller), access::only_role_guard(step.role));

  const bool creating = !step.required_state.has_value();
  std::uint64_t upc = creating ? arg<std::uint64_t>(args, 2) : arg<std::uint64_t>(args, 0);
  ShipmentItem* existing = nullptr;
  if (creating) {
    if (items_.contains(upc)) throw ContractError("DuplicateUPC", std::to_string(upc));
    if (arg<std::string>(args, 0).empty()) throw ContractError("BadArguments", "empty sku");
  } else {
    auto it = items_.find(upc);
    if (it == items_.end()) throw ContractError("UnknownUPC", std::to_string(upc));
    existing = &it->second;
    access::require(access::state_is(existing->state, *step.required_state), guard_name_of(*step.required_state));
    std::optional<Address> bound;
    switch (step.binding) {
      case CallerBinding::None: break;
      case CallerBinding::Owner: bound = existing->owner; break;
      case CallerBinding::OriginManufacturer: bound = existing->origin_manufacturer; break;
      case CallerBinding::Distributor: bound = existing->distributor.value_or(Address{}); break;
    }
    if (bound) access::require(access::verify_caller(caller, *bound), "verifyCaller");
  }

  // Oracle fees for this action must be payable before anything changes.
  const auto& fees = genesis_.oracle.fees;
  auto total = fees.action_total(step.operation);
  auto balance = oracle_.link().balance(genesis_.contract_account);
  if (balance < total)
    throw ContractError("InsufficientLink", "balance " + balance.tokens_string() + " < fee " + total.tokens_string());

  ShipmentItem* item = existing;
  Address prior;
  if (creating) {
    ShipmentItem fresh;
    fresh.upc = upc;
    fresh.sku = arg<std::string>(args, 0);
    fresh.drug_name = arg<std::string>(args, 1);
    fresh.state = step.target;
    fresh.owner = caller;
    fresh.origin_manufacturer = caller;
    item = &items_.emplace(upc, std::move(fresh)).first->second;
  } else {
    prior = item->owner;
    item->state = step.target;
    switch (step.custody) {
      case CustodyChange::None: break;
      case CustodyChange::Distributor: item->owner = caller; item->distributor = caller; break;
      case CustodyChange::Retailer: item->owner = caller; item->retailer = caller; break;
      case CustodyChange::Consumer: item->owner = caller; item->consumer = caller; break;
    }
  }
  item->history.push_back(
      {std::string(name_of(step.target)), ctx.block.height, ctx.tx_id, ctx.block.timestamp_ms, prior, item->owner});
  events.emplace_back(std::string(name_of(step.target)), upc);

  if (auto it = fees.per_action.find(std::string(step.operation)); it != fees.per_action.end()) {
    std::uint32_t index = 0;
    for (const auto& [field, fee] : it->second)
      oracle_.request_data(oracle_request_id(ctx.tx_id, index++), genesis_.contract_account, caller, item->sku,
                           field, fee, ctx.block.height, ctx.block.timestamp_ms);
  }
  return std::string(name_of(item->state));
}

const ShipmentItem* SupplyChainContract::find_item(std::uint64_t upc) const {
  auto it = items_.find(upc);
  return it == items_.end() ? nullptr : &it->second;
}

const ShipmentItem& SupplyChainContract::fetch_item_details(std::uint64_t upc) const {
  const auto* item = find_item(upc);
  if (!item) throw ContractError("UnknownUPC", std::to_string(upc));
  return *item;
}

ledger::KvMap SupplyChainContract::export_state() const {
  ledger::KvMap kv;
  kv[std::string(kGenesisKey)] = genesis_.encode();
  roles_.export_to(kv);
  for (const auto& [upc, item] : items_) kv[item_key(upc)] = item.encode();
  oracle_.export_to(kv);
  return kv;
}

void SupplyChainContract::import_state(const ledger::KvMap& kv) {
  auto g = kv.find(std::string(kGenesisKey));
  if (g == kv.end()) throw DecodeError("state has no genesis config");
  genesis_ = GenesisConfig::decode(g->second);
  roles_ = access::RoleRegistry::import_from(kv);
  items_.clear();
  for (auto it = kv.lower_bound(std::string(kItemPrefix)); it != kv.end() && it->first.starts_with(kItemPrefix); ++it) {
    auto item = ShipmentItem::decode(it->second);
    items_.emplace(item.upc, std::move(item));
  }
  oracle_.import_from(kv);
}

std::unique_ptr<ledger::StateMachine> SupplyChainContract::fresh_genesis() const {
  return std::make_unique<SupplyChainContract>(genesis_);
}

}  // namespace pharmachain::supply
