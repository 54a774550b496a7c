#include "pharmachain/node/node.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <iostream>

#include "pharmachain/gateway/gateway.hpp"

namespace pharmachain::node {

Node::Node(NodeConfig config, Keystore keys, ledger::Clock clock, bool persistent)
    : config_(std::move(config)),
      keys_(std::move(keys)),
      clock_(std::move(clock)),
      schedule_(config_.schedule()),
      persistent_(persistent) {
  for (const auto& name : config_.validators) {
    auto k = keys_.get(name).key();
    validator_keys_.emplace(k.address(), k);
  }
  ledger::LedgerOptions opts;
  opts.validators = config_.validator_set(keys_);
  opts.genesis_timestamp_ms = config_.genesis_timestamp_ms ? config_.genesis_timestamp_ms : clock_();
  if (persistent_) {
    opts.data_dir = config_.resolve(config_.data_dir);
    std::filesystem::create_directories(*opts.data_dir);
    lock_fd_ = ::open((*opts.data_dir / "LOCK").c_str(), O_RDWR | O_CREAT, 0644);
    if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
      if (lock_fd_ >= 0) ::close(lock_fd_);
      throw std::runtime_error("chain directory " + opts.data_dir->string() +
                               " is in use by another process; talk to it with --node-url");
    }
  }
  auto genesis = std::make_unique<supply::SupplyChainContract>(config_.genesis(keys_));
  const auto& first = validator_keys_.at(opts.validators.scheduled(0).address());
  if (opts.data_dir && std::filesystem::exists(*opts.data_dir / "chain.log"))
    ledger_ = ledger::Ledger::open(std::move(opts), std::move(genesis));
  else
    ledger_ = ledger::Ledger::create(std::move(opts), std::move(genesis), first);
}

Node::~Node() {
  stop();
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Node::start() {
  if (running_.exchange(true)) return;
  producer_ = std::thread([this] { producer_loop(); });
}

void Node::stop() {
  if (!running_.exchange(false)) return;
  wake_cv_.notify_all();
  if (producer_.joinable()) producer_.join();
}

ledger::Block Node::produce() {
  std::lock_guard lock(produce_mu_);
  auto height = ledger_->tip_height() + 1;
  const auto& key = validator_keys_.at(ledger_->validators().scheduled(height).address());
  auto b = ledger_->produce_block(clock_(), key);
  {
    std::lock_guard w(wake_mu_);
  }
  mined_cv_.notify_all();
  return b;
}

std::uint64_t Node::next_due_ms() const {
  return ledger_->tip_timestamp() + schedule_.interval_before(ledger_->tip_height() + 1);
}

std::optional<ledger::Block> Node::try_produce(bool allow_empty) {
  if (!allow_empty && ledger_->mempool_size() == 0) return std::nullopt;
  if (clock_() < next_due_ms()) return std::nullopt;
  return produce();
}

void Node::producer_loop() {
  while (running_) {
    try {
      if (try_produce()) continue;
    } catch (const std::exception& e) {
      std::cerr << "producer: " << e.what() << '\n';
      std::unique_lock lock(wake_mu_);
      wake_cv_.wait_for(lock, std::chrono::seconds(1), [&] { return !running_; });
      continue;
    }
    std::unique_lock lock(wake_mu_);
    wake_cv_.wait_for(lock, std::chrono::milliseconds(20), [&] { return !running_ || poked_.exchange(false); });
  }
}

Keystore Node::keystore() const {
  std::shared_lock lock(keys_mu_);
  return keys_;
}

const Account& Node::add_account(const std::string& name) {
  std::unique_lock lock(keys_mu_);
  const auto& a = keys_.create(name);
  if (persistent_) keys_.save(config_.resolve(config_.keystore));
  return a;
}

TxResult Node::submit(const std::string& account, std::string operation, ledger::Args args,
                      std::chrono::milliseconds wait) {
  KeyPair key = [&] {
    std::shared_lock lock(keys_mu_);
    return keys_.get(account).key();
  }();
  ledger::Transaction tx;
  {
    // nonce allocation and admission must not interleave for one sender
    std::lock_guard lock(submit_mu_);
    tx = ledger::Transaction::make(key, ledger_->next_nonce(key.address()), std::move(operation), std::move(args));
    ledger_->submit_transaction(tx);
  }
  return submit_signed_admitted(tx.id(), wait);
}

TxResult Node::submit_signed(ledger::Transaction tx, std::chrono::milliseconds wait) {
  {
    std::lock_guard lock(submit_mu_);
    ledger_->submit_transaction(tx);
  }
  return submit_signed_admitted(tx.id(), wait);
}

TxResult Node::submit_signed_admitted(const Hash256& id, std::chrono::milliseconds wait) {
  if (schedule_.on_demand() && !running_) {
    if (!ledger_->locate(id)) produce();
    return result_for(id);
  }
  {
    std::lock_guard lock(wake_mu_);
    poked_ = true;
  }
  wake_cv_.notify_all();
  std::unique_lock lock(wake_mu_);
  mined_cv_.wait_for(lock, wait, [&] { return ledger_->locate(id).has_value(); });
  lock.unlock();
  return result_for(id);
}

TxResult Node::result_for(const Hash256& id) const {
  TxResult r;
  r.tx_id = id;
  auto loc = ledger_->locate(id);
  if (!loc) return r;
  r.included = true;
  r.block_height = loc->height;
  auto b = ledger_->block(loc->height);
  r.receipt = b.receipts[loc->index];
  for (const auto& e : b.events)
    if (e.tx_id == id) r.events.push_back(e);
  return r;
}

std::vector<TxResult> enrol_default_roles(Node& node, std::chrono::milliseconds wait) {
  auto keys = node.keystore();
  std::vector<Hash256> pending;
  std::vector<TxResult> out;
  for (auto r : access::kAllRoles) {
    const auto* acc = keys.find(access::role_name(r));
    if (!acc) continue;
    bool has = node.with_contract(
        [&](const supply::SupplyChainContract& c) { return c.roles().has(r, acc->address()); });
    if (has) continue;
    out.push_back(node.submit(node.config().owner, "add" + std::string(access::role_title(r)), {acc->address()},
                              std::chrono::milliseconds(0)));
  }
  auto deadline = std::chrono::steady_clock::now() + wait;
  for (auto& r : out) {
    while (!r.included && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      if (node.ledger().locate(r.tx_id)) r = node.result_for(r.tx_id);
    }
  }
  return out;
}

NodeConfig init_network(const std::filesystem::path& dir, NodeConfig config, bool deterministic) {
  std::filesystem::create_directories(dir);
  config.base_dir = dir;
  auto ks_path = config.resolve(config.keystore);
  if (std::filesystem::exists(ks_path)) throw std::runtime_error("keystore already exists at " + ks_path.string());
  Keystore ks;
  auto make = [&](const std::string& name) {
    if (ks.find(name)) return;
    deterministic ? ks.create_deterministic(name) : ks.create(name);
  };
  for (const auto& name : {"owner", "manufacturer", "distributor", "retailer", "consumer"}) make(name);
  for (const auto& v : config.validators) make(v);
  for (const auto& o : config.oracle.nodes)
    if (!o.starts_with("0x")) make(o);
  make("sensor-0");
  ks.save(ks_path);
  gateway::save_node_registry(config.resolve(config.gateway.nodes_file),
                              {{"sensor-0", ks.get("sensor-0").key().public_key()}});
  config.save(dir / "config.json");
  return config;
}

}  // namespace pharmachain::node
