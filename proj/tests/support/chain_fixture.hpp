#pragma once

// Small in-memory chain for tests: one contract, a fixed validator rotation,
// and a manual clock that advances one block interval per produced block.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pharmachain/ledger/ledger.hpp"
#include "pharmachain/supply/contract.hpp"

namespace fixture {

using namespace pharmachain;

inline ledger::ValidatorSet make_validators(const std::vector<KeyPair>& keys) {
  std::vector<ledger::ValidatorInfo> infos;
  for (std::size_t i = 0; i < keys.size(); ++i) infos.push_back({"validator-" + std::to_string(i), keys[i].public_key()});
  return ledger::ValidatorSet(std::move(infos));
}

struct Chain {
  std::vector<KeyPair> validators;
  KeyPair owner = KeyPair::from_label("owner");
  supply::GenesisConfig genesis;
  std::unique_ptr<ledger::Ledger> ledger;
  std::uint64_t now_ms = 1'700'000'000'000;
  std::uint64_t step_ms = 4000;

  explicit Chain(std::size_t validator_count = 3, std::optional<std::filesystem::path> dir = std::nullopt,
                 std::optional<supply::GenesisConfig> config = std::nullopt) {
    for (std::size_t i = 0; i < validator_count; ++i)
      validators.push_back(KeyPair::from_label("validator-" + std::to_string(i)));
    if (config) {
      genesis = *config;
    } else {
      genesis.owner = owner.address();
      genesis.oracle.nodes = {KeyPair::from_label("oracle-0").address()};
    }
    ledger = ledger::Ledger::create(options(dir), std::make_unique<supply::SupplyChainContract>(genesis), validators[0]);
  }

  ledger::LedgerOptions options(std::optional<std::filesystem::path> dir) const {
    ledger::LedgerOptions o;
    o.validators = make_validators(validators);
    o.genesis_timestamp_ms = 1'700'000'000'000;
    o.data_dir = std::move(dir);
    return o;
  }

  const KeyPair& scheduled() const { return validators[(ledger->tip_height() + 1) % validators.size()]; }

  Hash256 submit(const KeyPair& key, const std::string& op, ledger::Args args = {}) {
    auto tx = ledger::Transaction::make(key, ledger->next_nonce(key.address()), op, std::move(args));
    return ledger->submit_transaction(tx).tx_id;
  }

  ledger::Block produce() {
    now_ms += step_ms;
    return ledger->produce_block(now_ms, scheduled());
  }

  // Submit and mine in its own block; returns the receipt.
  ledger::Receipt call(const KeyPair& key, const std::string& op, ledger::Args args = {}) {
    auto id = submit(key, op, std::move(args));
    produce();
    return *ledger->receipt(id);
  }

  const supply::SupplyChainContract& contract() const {
    return ledger->read_state([](const ledger::StateMachine& sm) -> const supply::SupplyChainContract& {
      return dynamic_cast<const supply::SupplyChainContract&>(sm);
    });
  }
};

struct Actors {
  KeyPair manufacturer = KeyPair::from_label("manufacturer");
  KeyPair distributor = KeyPair::from_label("distributor");
  KeyPair retailer = KeyPair::from_label("retailer");
  KeyPair consumer = KeyPair::from_label("consumer");

  // Owner admits each actor into exactly its own role.
  void enrol(Chain& c) const {
    c.submit(c.owner, "addManufacturer", {manufacturer.address()});
    c.submit(c.owner, "addDistributor", {distributor.address()});
    c.submit(c.owner, "addRetailer", {retailer.address()});
    c.submit(c.owner, "addConsumer", {consumer.address()});
    c.produce();
  }
};

}  // namespace fixture
