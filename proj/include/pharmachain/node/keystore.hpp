#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pharmachain/crypto.hpp"

namespace pharmachain::node {

struct Account {
  std::string name;
  Seed seed;

  KeyPair key() const { return KeyPair::from_seed(seed); }
  Address address() const { return key().address(); }
};

// Named development accounts. Seeds are stored unencrypted:
// {"accounts": [{"name": "owner", "seed": "<64 hex>", "address": "0x..."}]}
class Keystore {
 public:
  static Keystore load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Adds a fresh random account. Throws std::invalid_argument if the name is taken.
  const Account& create(const std::string& name);
  // Adds an account whose seed is derived from its name, for reproducible setups.
  const Account& create_deterministic(const std::string& name);
  void add(Account a);

  // Looks up by name or by "0x" address.
  const Account* find(std::string_view name_or_address) const;
  const Account& get(std::string_view name_or_address) const;  // throws std::out_of_range
  const std::vector<Account>& accounts() const { return accounts_; }

 private:
  std::vector<Account> accounts_;
};

}  // namespace pharmachain::node
