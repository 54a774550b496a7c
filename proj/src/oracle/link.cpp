#include "pharmachain/oracle/link.hpp"

#include <algorithm>

#include "pharmachain/contract_error.hpp"

namespace pharmachain::oracle {

namespace {
std::string raw_to_string(LinkAmount::Raw v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

LinkAmount::Raw parse_digits(std::string_view digits) {
  if (digits.empty()) throw std::invalid_argument("empty amount");
  LinkAmount::Raw v = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("invalid digit in amount");
    auto next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v) throw std::overflow_error("amount too large");
    v = next;
  }
  return v;
}
}  // namespace

LinkAmount LinkAmount::parse_tokens(std::string_view text) {
  auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string frac = dot == std::string_view::npos ? "" : std::string(text.substr(dot + 1));
  if (frac.size() > 18) throw std::invalid_argument("more than 18 fractional digits");
  frac.append(18 - frac.size(), '0');
  Raw w = whole.empty() ? 0 : parse_digits(whole);
  return LinkAmount(w * kBaseUnitsPerToken + parse_digits(frac));
}

LinkAmount LinkAmount::parse_base_units(std::string_view text) { return LinkAmount(parse_digits(text)); }

std::string LinkAmount::base_units_string() const { return raw_to_string(units_); }

std::string LinkAmount::tokens_string() const {
  auto whole = raw_to_string(units_ / kBaseUnitsPerToken);
  auto frac = raw_to_string(units_ % kBaseUnitsPerToken);
  if (frac == "0") return whole;
  frac.insert(0, 18 - frac.size(), '0');
  while (frac.back() == '0') frac.pop_back();
  return whole + "." + frac;
}

void LinkAmount::encode(ByteWriter& w) const {
  w.u64(static_cast<std::uint64_t>(units_ >> 64));
  w.u64(static_cast<std::uint64_t>(units_));
}

LinkAmount LinkAmount::decode(ByteReader& r) {
  Raw hi = r.u64();
  Raw lo = r.u64();
  return LinkAmount((hi << 64) | lo);
}

LinkAmount LinkLedger::balance(const Address& holder) const {
  auto it = balances_.find(holder);
  return it == balances_.end() ? LinkAmount{} : it->second;
}

LinkAmount LinkLedger::total() const {
  LinkAmount sum = escrow_;
  for (const auto& [_, amount] : balances_) sum += amount;
  return sum;
}

void LinkLedger::mint(const Address& holder, LinkAmount amount) { balances_[holder] += amount; }

LinkLedger LinkLedger::restore(std::map<Address, LinkAmount> balances, LinkAmount escrow) {
  LinkLedger l;
  l.balances_ = std::move(balances);
  l.escrow_ = escrow;
  return l;
}

void LinkLedger::move_to_escrow(const Address& holder, LinkAmount amount) {
  auto current = balance(holder);
  if (current < amount)
    throw ContractError("InsufficientLink", "balance " + current.tokens_string() + " < fee " + amount.tokens_string());
  balances_[holder] = current - amount;
  escrow_ += amount;
}

void LinkLedger::release_from_escrow(const Address& to, LinkAmount amount) {
  escrow_ -= amount;
  balances_[to] += amount;
}

}  // namespace pharmachain::oracle
