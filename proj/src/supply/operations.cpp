#include "pharmachain/supply/operations.hpp"

namespace pharmachain::supply {

std::string_view param_type_name(ParamType t) {
  switch (t) {
    case ParamType::U64: return "uint";
    case ParamType::I64: return "int";
    case ParamType::String: return "string";
    case ParamType::Address: return "address";
    case ParamType::Hash: return "hash";
    case ParamType::Bool: return "bool";
  }
  return "?";
}

const std::vector<OperationSpec>& operation_catalog() {
  static const std::vector<OperationSpec> catalog = [] {
    std::vector<OperationSpec> ops;
    for (auto r : access::kAllRoles) {
      static const std::array<std::string_view, 4> adds = {"addManufacturer", "addDistributor", "addRetailer",
                                                            "addConsumer"};
      ops.push_back({adds[static_cast<std::size_t>(r)], OperationKind::RoleAdmin, {{"account", ParamType::Address}}});
    }
    for (auto r : access::kAllRoles) {
      static const std::array<std::string_view, 4> renounces = {"renounceManufacturer", "renounceDistributor",
                                                                "renounceRetailer", "renounceConsumer"};
      ops.push_back({renounces[static_cast<std::size_t>(r)], OperationKind::RoleAdmin, {}});
    }
    ops.push_back({"transferOwnership", OperationKind::Ownership, {{"newOwner", ParamType::Address}}});

    ops.push_back({"produceItemByManufacturer",
                   OperationKind::Lifecycle,
                   {{"sku", ParamType::String}, {"drugName", ParamType::String}, {"upc", ParamType::U64}}});
    for (std::size_t i = 1; i < kLifecycle.size(); ++i)
      ops.push_back({kLifecycle[i].operation, OperationKind::Lifecycle, {{"upc", ParamType::U64}}});

    for (const auto& r : kRequestOperations)
      ops.push_back({r.operation, OperationKind::Oracle, {{"sku", ParamType::String}}});
    ops.push_back({"fulfillOracleRequest",
                   OperationKind::Oracle,
                   {{"requestId", ParamType::Hash}, {"value", ParamType::I64}, {"ok", ParamType::Bool}}});
    return ops;
  }();
  return catalog;
}

const OperationSpec* find_operation(std::string_view name) {
  for (const auto& op : operation_catalog())
    if (op.name == name) return &op;
  return nullptr;
}

bool args_match(const OperationSpec& spec, const ledger::Args& args) {
  if (args.size() != spec.params.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    // Variant alternative order matches ParamType order.
    if (args[i].index() != static_cast<std::size_t>(spec.params[i].type)) return false;
  }
  return true;
}

const LifecycleStep* find_lifecycle_step(std::string_view operation) {
  for (const auto& s : kLifecycle)
    if (s.operation == operation) return &s;
  return nullptr;
}

}  // namespace pharmachain::supply
