#include "pharmachain/access/roles.hpp"

#include <algorithm>
#include <cctype>

#include "pharmachain/contract_error.hpp"

namespace pharmachain::access {

namespace {
constexpr std::array<std::string_view, 4> kRoleNames = {"manufacturer", "distributor", "retailer", "consumer"};
constexpr std::array<std::string_view, 4> kRoleTitles = {"Manufacturer", "Distributor", "Retailer", "Consumer"};
constexpr std::string_view kOwnerKey = "role/owner";
}  // namespace

std::string_view role_name(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }
std::string_view role_title(Role r) { return kRoleTitles[static_cast<std::size_t>(r)]; }

std::optional<Role> parse_role(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (std::size_t i = 0; i < kRoleNames.size(); ++i)
    if (kRoleNames[i] == lower) return static_cast<Role>(i);
  return std::nullopt;
}

std::string only_role_guard(Role r) { return "only" + std::string(role_title(r)); }

RoleRegistry::RoleRegistry(const Address& owner) : owner_(owner) {
  for (auto& set : members_) set.insert(owner);
}

void RoleRegistry::add(Role r, const Address& caller, const Address& account) {
  if (!has(r, caller)) throw ContractError("RoleDenied", only_role_guard(r));
  if (has(r, account)) throw ContractError("AlreadyHasRole", std::string(role_name(r)));
  members_[index(r)].insert(account);
}

void RoleRegistry::renounce(Role r, const Address& caller) {
  if (!has(r, caller)) throw ContractError("RoleDenied", only_role_guard(r));
  members_[index(r)].erase(caller);
}

void RoleRegistry::transfer_ownership(const Address& caller, const Address& new_owner) {
  require(only_owner(*this, caller), "onlyOwner");
  if (new_owner.is_zero()) throw ContractError("BadArguments", "new owner must not be the zero address");
  owner_ = new_owner;
}

void RoleRegistry::export_to(ledger::KvMap& kv) const {
  kv[std::string(kOwnerKey)] = Bytes(owner_.data.begin(), owner_.data.end());
  for (auto r : kAllRoles)
    for (const auto& a : members(r)) kv["role/" + std::string(role_name(r)) + "/" + a.str()] = Bytes{1};
}

RoleRegistry RoleRegistry::import_from(const ledger::KvMap& kv) {
  RoleRegistry reg;
  if (auto it = kv.find(std::string(kOwnerKey)); it != kv.end()) reg.owner_ = Address::from_view(it->second);
  for (auto r : kAllRoles) {
    std::string prefix = "role/" + std::string(role_name(r)) + "/";
    for (auto it = kv.lower_bound(prefix); it != kv.end() && it->first.starts_with(prefix); ++it)
      reg.members_[index(r)].insert(Address::parse(it->first.substr(prefix.size())));
  }
  return reg;
}

bool only_owner(const RoleRegistry& roles, const Address& caller) { return roles.is_owner(caller); }

bool only_role(const RoleRegistry& roles, Role r, const Address& caller) { return roles.has(r, caller); }

bool verify_caller(const Address& caller, const Address& expected) { return caller == expected; }

bool state_is(supply::ShipmentState actual, supply::ShipmentState required) { return actual == required; }

void require(bool passed, std::string_view guard_name) {
  if (!passed) throw ContractError("GuardFailed", std::string(guard_name));
}

std::optional<bool> evaluate_guard(std::string_view guard_name, const GuardQuery& q) {
  if (guard_name == "onlyOwner") return q.roles && only_owner(*q.roles, q.caller);
  for (auto r : kAllRoles)
    if (guard_name == only_role_guard(r)) return q.roles && only_role(*q.roles, r, q.caller);
  if (guard_name == "verifyCaller") return q.bound_address && verify_caller(q.caller, *q.bound_address);
  for (std::size_t i = 0; i < supply::kStateCount; ++i) {
    if (guard_name == supply::kStateGuardNames[i])
      return q.item_state && state_is(*q.item_state, static_cast<supply::ShipmentState>(i));
  }
  return std::nullopt;
}

}  // namespace pharmachain::access
