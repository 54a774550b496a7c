#include "pharmachain/node/keystore.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pharmachain::node {

Keystore Keystore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keystore " + path.string());
  auto j = nlohmann::json::parse(in);
  Keystore ks;
  for (const auto& a : j.at("accounts")) {
    Account acc{a.at("name").get<std::string>(), Seed::from_hex_string(a.at("seed").get<std::string>())};
    if (a.contains("address") && Address::parse(a["address"].get<std::string>()) != acc.address())
      throw std::runtime_error("keystore entry " + acc.name + " has a mismatched address");
    ks.add(std::move(acc));
  }
  return ks;
}

void Keystore::save(const std::filesystem::path& path) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& a : accounts_) list.push_back({{"name", a.name}, {"seed", a.seed.hex()}, {"address", a.address().str()}});
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write keystore " + path.string());
  out << nlohmann::json{{"accounts", list}}.dump(2) << '\n';
}

void Keystore::add(Account a) {
  if (a.name.empty() || a.name.starts_with("0x")) throw std::invalid_argument("invalid account name '" + a.name + "'");
  if (find(a.name)) throw std::invalid_argument("account " + a.name + " already exists");
  accounts_.push_back(std::move(a));
}

const Account& Keystore::create(const std::string& name) {
  add({name, KeyPair::generate().seed()});
  return accounts_.back();
}

const Account& Keystore::create_deterministic(const std::string& name) {
  add({name, KeyPair::from_label(name).seed()});
  return accounts_.back();
}

const Account* Keystore::find(std::string_view key) const {
  if (key.starts_with("0x")) {
    Address a;
    try {
      a = Address::parse(key);
    } catch (const std::exception&) {
      return nullptr;
    }
    for (const auto& acc : accounts_)
      if (acc.address() == a) return &acc;
    return nullptr;
  }
  for (const auto& acc : accounts_)
    if (acc.name == key) return &acc;
  return nullptr;
}

const Account& Keystore::get(std::string_view key) const {
  if (const auto* a = find(key)) return *a;
  throw std::out_of_range("unknown account " + std::string(key));
}

}  // namespace pharmachain::node
