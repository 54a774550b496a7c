#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "pharmachain/crypto.hpp"
#include "pharmachain/ledger/storage.hpp"
#include "pharmachain/supply/shipment_state.hpp"

namespace pharmachain::access {

enum class Role : std::uint8_t { Manufacturer = 0, Distributor = 1, Retailer = 2, Consumer = 3 };

inline constexpr std::array<Role, 4> kAllRoles = {Role::Manufacturer, Role::Distributor, Role::Retailer,
                                                  Role::Consumer};

std::string_view role_name(Role r);  // "manufacturer"
std::string_view role_title(Role r);  // "Manufacturer"
std::optional<Role> parse_role(std::string_view name);  // case-insensitive
// Name of the modifier requiring role r, e.g. "onlyManufacturer".
std::string only_role_guard(Role r);

class RoleRegistry {
 public:
  RoleRegistry() = default;
  // The owner starts with every role so it can admit the first member of each.
  explicit RoleRegistry(const Address& owner);

  const Address& owner() const { return owner_; }
  bool is_owner(const Address& a) const { return a == owner_; }
  bool has(Role r, const Address& a) const { return members_[index(r)].contains(a); }
  const std::set<Address>& members(Role r) const { return members_[index(r)]; }

  // Peer admission: the caller must already hold r. Throws RoleDenied / AlreadyHasRole.
  void add(Role r, const Address& caller, const Address& account);
  // Caller drops its own membership in r. Throws RoleDenied if it has none.
  void renounce(Role r, const Address& caller);
  // Only the current owner may hand ownership on. Roles are not transferred.
  void transfer_ownership(const Address& caller, const Address& new_owner);

  void export_to(ledger::KvMap& kv) const;
  static RoleRegistry import_from(const ledger::KvMap& kv);

 private:
  static std::size_t index(Role r) { return static_cast<std::size_t>(r); }

  Address owner_;
  std::array<std::set<Address>, 4> members_;
};

// Guard predicates. Each returns pass/fail and never mutates anything.
bool only_owner(const RoleRegistry& roles, const Address& caller);
bool only_role(const RoleRegistry& roles, Role r, const Address& caller);
bool verify_caller(const Address& caller, const Address& expected);
bool state_is(supply::ShipmentState actual, supply::ShipmentState required);

// Throws ContractError("GuardFailed", guard_name) when passed is false.
void require(bool passed, std::string_view guard_name);

struct GuardQuery {
  const RoleRegistry* roles = nullptr;
  Address caller;
  std::optional<supply::ShipmentState> item_state;  // for state guards
  std::optional<Address> bound_address;             // for verifyCaller
};

// Evaluates a modifier by name: onlyOwner, only<Role>, verifyCaller, or one of the
// thirteen state guards. Returns nullopt for an unknown guard name, false when the
// guard needs data the query lacks.
std::optional<bool> evaluate_guard(std::string_view guard_name, const GuardQuery& q);

}  // namespace pharmachain::access
