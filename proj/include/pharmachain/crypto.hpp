#pragma once

// Hashing, signing and account addresses. Backed by libsodium:
// SHA-256 for every digest, Ed25519 for signatures.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "pharmachain/bytes.hpp"

namespace pharmachain {

template <std::size_t N, typename Tag>
struct FixedBytes {
  static constexpr std::size_t kSize = N;
  std::array<std::uint8_t, N> data{};

  ByteView view() const { return ByteView(data.data(), data.size()); }
  bool is_zero() const {
    for (auto b : data)
      if (b != 0) return false;
    return true;
  }
  std::string hex() const { return to_hex(view()); }

  static FixedBytes from_view(ByteView v) {
    if (v.size() != N) throw DecodeError("fixed-size field has wrong length");
    FixedBytes out;
    std::copy(v.begin(), v.end(), out.data.begin());
    return out;
  }
  static FixedBytes from_hex_string(std::string_view s) { return from_view(from_hex(s)); }

  auto operator<=>(const FixedBytes&) const = default;
};

struct HashTag {};
struct PublicKeyTag {};
struct SignatureTag {};
struct SeedTag {};

using Hash256 = FixedBytes<32, HashTag>;
using PublicKey = FixedBytes<32, PublicKeyTag>;
using Signature = FixedBytes<64, SignatureTag>;
using Seed = FixedBytes<32, SeedTag>;

// 20-byte account identifier: the last 20 bytes of SHA-256(public key).
struct Address {
  std::array<std::uint8_t, 20> data{};

  static Address from_public_key(const PublicKey& key);
  // Accepts "0x" + 40 hex digits (any case).
  static Address parse(std::string_view text);
  static Address from_view(ByteView v);

  ByteView view() const { return ByteView(data.data(), data.size()); }
  bool is_zero() const;
  // Canonical rendering: "0x" + 40 lowercase hex characters.
  std::string str() const { return "0x" + to_hex(view()); }

  auto operator<=>(const Address&) const = default;
};

Hash256 sha256(ByteView data);
Hash256 sha256(std::string_view text);

class KeyPair {
 public:
  static KeyPair generate();
  static KeyPair from_seed(const Seed& seed);
  // Deterministic key from a label; used for reproducible demo and test accounts.
  static KeyPair from_label(std::string_view label);

  const PublicKey& public_key() const { return public_; }
  const Seed& seed() const { return seed_; }
  Address address() const { return Address::from_public_key(public_); }

  Signature sign(ByteView message) const;

 private:
  Seed seed_;
  PublicKey public_;
  std::array<std::uint8_t, 64> secret_{};
};

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig);

// Must be called once before any other function here; safe to call repeatedly.
void crypto_init();

}  // namespace pharmachain

template <>
struct std::hash<pharmachain::Address> {
  std::size_t operator()(const pharmachain::Address& a) const noexcept {
    std::size_t h = 0;
    for (auto b : a.data) h = h * 131 + b;
    return h;
  }
};
