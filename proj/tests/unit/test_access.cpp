#include <functional>
#include "doctest.h"

#include "pharmachain/access/roles.hpp"
#include "pharmachain/contract_error.hpp"

using namespace pharmachain;
using access::Role;
using access::RoleRegistry;

namespace {
std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ContractError& e) {
    return e.code() + ":" + e.detail();
  }
  return "";
}
}  // namespace

TEST_CASE("owner is seeded with every role") {
  auto owner = KeyPair::from_label("owner").address();
  RoleRegistry reg(owner);
  for (auto r : access::kAllRoles) CHECK(reg.has(r, owner));
  CHECK(reg.is_owner(owner));
}

TEST_CASE("add, renounce and membership") {
  auto owner = KeyPair::from_label("owner").address();
  auto a = KeyPair::from_label("a").address();
  auto c = KeyPair::from_label("c").address();
  RoleRegistry reg(owner);

  reg.add(Role::Manufacturer, owner, a);
  CHECK(reg.has(Role::Manufacturer, a));
  CHECK_FALSE(reg.has(Role::Distributor, a));
  CHECK(code_of([&] { reg.add(Role::Manufacturer, owner, a); }) == "AlreadyHasRole:manufacturer");

  reg.add(Role::Consumer, owner, c);
  CHECK(code_of([&] { reg.add(Role::Manufacturer, c, KeyPair::from_label("x").address()); }) ==
        "RoleDenied:onlyManufacturer");

  // Peer admission: a manufacturer may admit another manufacturer.
  auto b = KeyPair::from_label("b").address();
  reg.add(Role::Manufacturer, a, b);
  CHECK(reg.has(Role::Manufacturer, b));

  reg.add(Role::Distributor, owner, a);
  reg.renounce(Role::Manufacturer, a);
  CHECK_FALSE(reg.has(Role::Manufacturer, a));
  CHECK(reg.has(Role::Distributor, a));
  CHECK(code_of([&] { reg.renounce(Role::Manufacturer, a); }) == "RoleDenied:onlyManufacturer");
  CHECK_FALSE(reg.has(Role::Retailer, KeyPair::from_label("unknown").address()));
}

TEST_CASE("ownership transfer") {
  auto owner = KeyPair::from_label("owner").address();
  auto next = KeyPair::from_label("next").address();
  RoleRegistry reg(owner);
  CHECK(code_of([&] { reg.transfer_ownership(next, next); }) == "GuardFailed:onlyOwner");
  reg.transfer_ownership(owner, next);
  CHECK(reg.is_owner(next));
  CHECK_FALSE(reg.is_owner(owner));
  CHECK(reg.has(Role::Manufacturer, owner));
}

TEST_CASE("registry export round trips") {
  auto owner = KeyPair::from_label("owner").address();
  RoleRegistry reg(owner);
  reg.add(Role::Retailer, owner, KeyPair::from_label("r").address());
  ledger::KvMap kv;
  reg.export_to(kv);
  auto back = RoleRegistry::import_from(kv);
  ledger::KvMap kv2;
  back.export_to(kv2);
  CHECK(kv == kv2);
  CHECK(back.owner() == owner);
}

TEST_CASE("guards by name") {
  auto owner = KeyPair::from_label("owner").address();
  auto other = KeyPair::from_label("other").address();
  RoleRegistry reg(owner);
  access::GuardQuery q{&reg, owner, std::nullopt, std::nullopt};
  CHECK(*access::evaluate_guard("onlyOwner", q));
  CHECK(*access::evaluate_guard("onlyConsumer", q));
  q.caller = other;
  CHECK_FALSE(*access::evaluate_guard("onlyOwner", q));
  q.bound_address = owner;
  CHECK_FALSE(*access::evaluate_guard("verifyCaller", q));
  q.caller = owner;
  CHECK(*access::evaluate_guard("verifyCaller", q));
  q.item_state = supply::ShipmentState::ProducedByManufacturer;
  CHECK(*access::evaluate_guard("producedByManufacturer", q));
  CHECK_FALSE(*access::evaluate_guard("updateInventoryByManufacturer", q));
  CHECK_FALSE(access::evaluate_guard("noSuchGuard", q).has_value());
}

TEST_CASE("state table matches the enumeration") {
  using supply::ShipmentState;
  CHECK(supply::value_of(ShipmentState::ProducedByManufacturer) == 0);
  CHECK(supply::value_of(ShipmentState::PurchasedByRetailer) == 8);
  CHECK(supply::value_of(ShipmentState::ShippedByDistributor) == 9);
  CHECK(supply::value_of(ShipmentState::PurchasedByConsumer) == 12);
  CHECK(supply::name_of(ShipmentState::ReceivedByDistributor) == "ReceivedByDistributor");
  CHECK(supply::state_from_name("ForSaleByRetailer") == ShipmentState::ForSaleByRetailer);
  CHECK_FALSE(supply::state_from_value(13).has_value());
}
