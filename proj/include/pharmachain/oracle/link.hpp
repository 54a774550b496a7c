#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pharmachain/bytes.hpp"
#include "pharmachain/crypto.hpp"

namespace pharmachain::oracle {

// Link-token amount in base units (1 token = 10^18 base units).
class LinkAmount {
 public:
  using Raw = unsigned __int128;
  static constexpr std::uint64_t kBaseUnitsPerToken = 1'000'000'000'000'000'000ULL;

  constexpr LinkAmount() = default;
  constexpr explicit LinkAmount(Raw units) : units_(units) {}
  static constexpr LinkAmount base_units(std::uint64_t n) { return LinkAmount(Raw{n}); }
  static constexpr LinkAmount tokens(std::uint64_t n) { return LinkAmount(Raw{n} * kBaseUnitsPerToken); }
  // Decimal token notation, e.g. "0.5" or "12"; at most 18 fractional digits.
  static LinkAmount parse_tokens(std::string_view text);
  // Plain integer count of base units.
  static LinkAmount parse_base_units(std::string_view text);

  Raw raw() const { return units_; }
  std::string base_units_string() const;
  std::string tokens_string() const;  // trailing zeros trimmed: "0.4", "5.4", "1"

  void encode(ByteWriter& w) const;
  static LinkAmount decode(ByteReader& r);

  LinkAmount operator+(LinkAmount o) const { return LinkAmount(units_ + o.units_); }
  LinkAmount operator-(LinkAmount o) const {
    if (o.units_ > units_) throw std::underflow_error("link amount underflow");
    return LinkAmount(units_ - o.units_);
  }
  LinkAmount operator/(std::uint64_t d) const { return LinkAmount(units_ / d); }
  LinkAmount operator%(std::uint64_t d) const { return LinkAmount(units_ % d); }
  LinkAmount& operator+=(LinkAmount o) { return *this = *this + o; }
  LinkAmount& operator-=(LinkAmount o) { return *this = *this - o; }
  auto operator<=>(const LinkAmount&) const = default;

 private:
  Raw units_ = 0;
};

// Balances plus the escrow pot holding fees of open requests. Every mutation
// moves value between accounts and escrow; the total never changes.
class LinkLedger {
 public:
  LinkAmount balance(const Address& holder) const;
  LinkAmount escrow() const { return escrow_; }
  LinkAmount total() const;

  void mint(const Address& holder, LinkAmount amount);  // genesis only
  static LinkLedger restore(std::map<Address, LinkAmount> balances, LinkAmount escrow);
  // Throws ContractError("InsufficientLink") if the holder cannot cover amount.
  void move_to_escrow(const Address& holder, LinkAmount amount);
  void release_from_escrow(const Address& to, LinkAmount amount);

  const std::map<Address, LinkAmount>& balances() const { return balances_; }

 private:
  std::map<Address, LinkAmount> balances_;
  LinkAmount escrow_;
};

}  // namespace pharmachain::oracle
