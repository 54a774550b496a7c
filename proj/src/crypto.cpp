#include "pharmachain/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

namespace pharmachain {

void crypto_init() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

Hash256 sha256(ByteView data) {
  Hash256 out;
  crypto_hash_sha256(out.data.data(), data.data(), data.size());
  return out;
}

Hash256 sha256(std::string_view text) {
  return sha256(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Address Address::from_public_key(const PublicKey& key) {
  auto digest = sha256(key.view());
  Address a;
  std::copy(digest.data.end() - 20, digest.data.end(), a.data.begin());
  return a;
}

Address Address::parse(std::string_view text) {
  if (!(text.starts_with("0x") || text.starts_with("0X")) || text.size() != 42)
    throw DecodeError("address must be 0x followed by 40 hex digits");
  return from_view(from_hex(text));
}

Address Address::from_view(ByteView v) {
  if (v.size() != 20) throw DecodeError("address must be 20 bytes");
  Address a;
  std::copy(v.begin(), v.end(), a.data.begin());
  return a;
}

bool Address::is_zero() const {
  return std::all_of(data.begin(), data.end(), [](auto b) { return b == 0; });
}

KeyPair KeyPair::generate() {
  crypto_init();
  Seed seed;
  randombytes_buf(seed.data.data(), seed.data.size());
  return from_seed(seed);
}

KeyPair KeyPair::from_seed(const Seed& seed) {
  crypto_init();
  KeyPair kp;
  kp.seed_ = seed;
  crypto_sign_seed_keypair(kp.public_.data.data(), kp.secret_.data(), seed.data.data());
  return kp;
}

KeyPair KeyPair::from_label(std::string_view label) {
  auto digest = sha256("pharmachain-key:" + std::string(label));
  return from_seed(Seed::from_view(digest.view()));
}

Signature KeyPair::sign(ByteView message) const {
  Signature sig;
  crypto_sign_detached(sig.data.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig) {
  crypto_init();
  return crypto_sign_verify_detached(sig.data.data(), message.data(), message.size(),
                                     key.data.data()) == 0;
}

}  // namespace pharmachain
