#include "pharmachain/ledger/ledger.hpp"

#include <algorithm>

namespace pharmachain::ledger {

namespace {
constexpr std::string_view kNoncePrefix = "nonce/";
constexpr const char* kLogName = "chain.log";
constexpr const char* kSnapshotName = "state.snapshot";
}  // namespace

ValidatorSet::ValidatorSet(std::vector<ValidatorInfo> validators) : validators_(std::move(validators)) {
  if (validators_.empty()) throw std::invalid_argument("validator set must not be empty");
}

const ValidatorInfo& ValidatorSet::scheduled(std::uint64_t height) const {
  return validators_.at(height % validators_.size());
}

const ValidatorInfo* ValidatorSet::find(const Address& a) const {
  for (const auto& v : validators_)
    if (v.address() == a) return &v;
  return nullptr;
}

ChainVerification verify_records(const std::vector<Bytes>& records, const ValidatorSet& validators) {
  auto fail = [](std::uint64_t h, std::string why) {
    return ChainVerification{false, h, std::move(why)};
  };
  if (records.empty()) return fail(0, "chain has no genesis block");

  Hash256 expected_parent;  // all-zero for genesis
  for (std::uint64_t h = 0; h < records.size(); ++h) {
    DecodedBlock decoded;
    try {
      decoded = decode_block(records[h]);
    } catch (const DecodeError& e) {
      return fail(h, std::string("undecodable block: ") + e.what());
    }
    const Block& b = decoded.block;
    ByteView body(records[h].data(), decoded.body_size);
    if (sha256(body) != b.block_hash) return fail(h, "block hash does not match contents");
    if (b.height != h) return fail(h, "height field does not match position");
    if (b.parent_hash != expected_parent) return fail(h, "parent hash does not link to previous block");
    const auto& scheduled = validators.scheduled(h);
    if (b.validator != scheduled.address()) return fail(h, "validator is not the scheduled producer");
    if (!verify_signature(scheduled.key, b.block_hash.view(), b.validator_signature))
      return fail(h, "validator signature invalid");
    if (b.receipts.size() != b.transactions.size()) return fail(h, "receipt count mismatch");
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
      const auto& tx = b.transactions[i];
      if (!tx.signature_valid()) return fail(h, "transaction signature invalid");
      if (b.receipts[i].tx_id != tx.id()) return fail(h, "receipt does not match transaction");
    }
    for (const auto& e : b.events)
      if (e.block_height != h) return fail(h, "event carries wrong block height");
    expected_parent = b.block_hash;
  }
  return {};
}

void Mempool::push(Transaction tx) {
  std::lock_guard lock(mu_);
  pending_nonce_[tx.sender] = tx.nonce;
  queue_.push_back(std::move(tx));
}

std::vector<Transaction> Mempool::drain() {
  std::lock_guard lock(mu_);
  std::vector<Transaction> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
  queue_.clear();
  pending_nonce_.clear();
  return out;
}

std::optional<std::uint64_t> Mempool::pending_nonce(const Address& sender) const {
  std::lock_guard lock(mu_);
  auto it = pending_nonce_.find(sender);
  if (it == pending_nonce_.end()) return std::nullopt;
  return it->second;
}

std::size_t Mempool::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

Ledger::Ledger(LedgerOptions options, std::unique_ptr<StateMachine> state)
    : options_(std::move(options)), state_(std::move(state)) {}

std::unique_ptr<Ledger> Ledger::create(LedgerOptions options, std::unique_ptr<StateMachine> genesis_state,
                                       const KeyPair& genesis_validator) {
  std::unique_ptr<Ledger> l(new Ledger(std::move(options), std::move(genesis_state)));
  if (genesis_validator.address() != l->options_.validators.scheduled(0).address())
    throw LedgerError("NotScheduledValidator", "genesis must be produced by the first validator");

  if (l->options_.data_dir) {
    std::filesystem::create_directories(*l->options_.data_dir);
    auto log_path = *l->options_.data_dir / kLogName;
    if (std::filesystem::exists(log_path) && std::filesystem::file_size(log_path) > 0)
      throw LedgerError("AlreadyInitialized", "block log already exists at " + log_path.string());
    l->log_ = std::make_unique<BlockLog>(log_path);
  }

  Block genesis;
  genesis.height = 0;
  genesis.timestamp_ms = l->options_.genesis_timestamp_ms;
  genesis.state_root = hash_kv(merged_state(*l->state_, l->nonces_));
  genesis.seal(genesis_validator);

  std::unique_lock lock(l->mu_);
  l->append_locked(genesis, genesis.encode());
  return l;
}

std::unique_ptr<Ledger> Ledger::open(LedgerOptions options, std::unique_ptr<StateMachine> genesis_state) {
  if (!options.data_dir) throw std::invalid_argument("open requires a data directory");
  std::unique_ptr<Ledger> l(new Ledger(std::move(options), std::move(genesis_state)));
  auto dir = *l->options_.data_dir;
  auto contents = BlockLog::read_all(dir / kLogName);
  if (contents.records.empty()) throw LedgerError("NotInitialized", "no block log in " + dir.string());

  l->records_ = std::move(contents.records);
  for (std::uint64_t h = 0; h < l->records_.size(); ++h) {
    try {
      auto decoded = decode_block(l->records_[h]);
      for (std::size_t i = 0; i < decoded.block.transactions.size(); ++i)
        l->tx_index_.emplace(decoded.block.transactions[i].id(), TxLocation{h, i});
      l->blocks_.push_back(std::move(decoded.block));
    } catch (const DecodeError&) {
      Block placeholder;
      placeholder.height = h;
      l->blocks_.push_back(std::move(placeholder));
    }
  }

  auto tip = l->records_.size() - 1;
  auto snapshot = read_snapshot(dir / kSnapshotName);
  if (snapshot && snapshot->height == tip) {
    import_merged(*l->state_, l->nonces_, snapshot->entries);
  } else {
    // Rebuild from the verifiable prefix.
    auto check = verify_records(l->records_, l->options_.validators);
    std::uint64_t limit = check.ok ? l->records_.size() : *check.first_bad_height;
    auto sm = l->state_->fresh_genesis();
    std::map<Address, std::uint64_t> nonces;
    for (std::uint64_t h = 1; h < limit; ++h) {
      const auto& b = l->blocks_[h];
      sm->begin_block({b.height, b.timestamp_ms});
      execute(*sm, nonces, {b.height, b.timestamp_ms}, b.transactions);
    }
    l->state_ = std::move(sm);
    l->nonces_ = std::move(nonces);
  }
  l->log_ = std::make_unique<BlockLog>(dir / kLogName);
  return l;
}

SubmitReceipt Ledger::submit_transaction(Transaction tx) {
  if (!tx.signature_valid()) throw LedgerError("InvalidSignature", "transaction signature does not verify");
  if (!state_->knows_operation(tx.operation))
    throw LedgerError("UnknownOperation", "unknown operation " + tx.operation);

  std::lock_guard admission(admission_mu_);
  auto expected = next_nonce(tx.sender);
  if (tx.nonce != expected)
    throw LedgerError("BadNonce",
                      "expected nonce " + std::to_string(expected) + ", got " + std::to_string(tx.nonce));
  SubmitReceipt receipt{tx.id(), "pending"};
  mempool_.push(std::move(tx));
  return receipt;
}

std::uint64_t Ledger::next_nonce(const Address& sender) const {
  if (auto pending = mempool_.pending_nonce(sender)) return *pending + 1;
  return confirmed_nonce(sender) + 1;
}

std::uint64_t Ledger::confirmed_nonce(const Address& sender) const {
  std::shared_lock lock(mu_);
  auto it = nonces_.find(sender);
  return it == nonces_.end() ? 0 : it->second;
}

Ledger::Executed Ledger::execute(StateMachine& sm, std::map<Address, std::uint64_t>& nonces,
                                 const BlockContext& ctx, const std::vector<Transaction>& txs) {
  Executed out;
  for (const auto& tx : txs) {
    Receipt r;
    r.tx_id = tx.id();
    auto& last = nonces[tx.sender];
    if (tx.nonce != last + 1) {
      r.error = "BadNonce";
      r.detail = "expected " + std::to_string(last + 1);
      if (last == 0) nonces.erase(tx.sender);
      out.receipts.push_back(std::move(r));
      continue;
    }
    last = tx.nonce;
    auto outcome = sm.apply(tx, TxContext{ctx, r.tx_id, tx.sender});
    r.success = outcome.success;
    r.error = std::move(outcome.error);
    r.detail = std::move(outcome.detail);
    r.result = std::move(outcome.result);
    if (r.success) {
      for (auto& [name, upc] : outcome.events) out.events.push_back(EventRecord{name, upc, ctx.height, r.tx_id});
    }
    out.receipts.push_back(std::move(r));
  }
  return out;
}

KvMap Ledger::merged_state(const StateMachine& sm, const std::map<Address, std::uint64_t>& nonces) {
  KvMap kv = sm.export_state();
  for (const auto& [addr, nonce] : nonces) {
    ByteWriter w;
    w.u64(nonce);
    kv.emplace(std::string(kNoncePrefix) + addr.str(), w.take());
  }
  return kv;
}

void Ledger::import_merged(StateMachine& sm, std::map<Address, std::uint64_t>& nonces, const KvMap& kv) {
  KvMap contract;
  nonces.clear();
  for (const auto& [key, value] : kv) {
    if (key.starts_with(kNoncePrefix)) {
      ByteReader r(value);
      nonces[Address::parse(key.substr(kNoncePrefix.size()))] = r.u64();
    } else {
      contract.emplace(key, value);
    }
  }
  sm.import_state(contract);
}

Block Ledger::produce_block(std::uint64_t now_ms, const KeyPair& validator_key) {
  std::lock_guard admission(admission_mu_);
  std::unique_lock lock(mu_);
  auto height = static_cast<std::uint64_t>(records_.size());
  const auto& scheduled = options_.validators.scheduled(height);
  if (validator_key.address() != scheduled.address())
    throw LedgerError("NotScheduledValidator",
                      "height " + std::to_string(height) + " belongs to validator " + scheduled.name);
  const auto& parent = blocks_.back();
  if (parent.block_hash.is_zero() && height > 0)
    throw LedgerError("ChainCorrupt", "cannot extend a chain whose tip does not decode");

  Block b;
  b.height = height;
  b.parent_hash = parent.block_hash;
  b.timestamp_ms = std::max(now_ms, parent.timestamp_ms);
  b.transactions = mempool_.drain();

  BlockContext ctx{b.height, b.timestamp_ms};
  state_->begin_block(ctx);
  auto executed = execute(*state_, nonces_, ctx, b.transactions);
  b.receipts = std::move(executed.receipts);
  b.events = std::move(executed.events);
  b.state_root = hash_kv(merged_state(*state_, nonces_));
  b.seal(validator_key);

  append_locked(b, b.encode());
  return b;
}

void Ledger::append_locked(const Block& b, Bytes record) {
  if (log_) log_->append(record);
  for (std::size_t i = 0; i < b.transactions.size(); ++i) tx_index_.emplace(b.receipts[i].tx_id, TxLocation{b.height, i});
  records_.push_back(std::move(record));
  blocks_.push_back(b);
  persist_snapshot_locked();
}

void Ledger::persist_snapshot_locked() const {
  if (!options_.data_dir) return;
  write_snapshot(*options_.data_dir / kSnapshotName,
                 Snapshot{static_cast<std::uint64_t>(records_.size() - 1), merged_state(*state_, nonces_)});
}

ChainVerification Ledger::verify_chain() const {
  std::shared_lock lock(mu_);
  return verify_records(records_, options_.validators);
}

std::unique_ptr<StateMachine> Ledger::replay() const {
  std::shared_lock lock(mu_);
  auto check = verify_records(records_, options_.validators);
  if (!check.ok)
    throw LedgerError("ChainCorrupt",
                      "chain fails verification at height " + std::to_string(*check.first_bad_height));

  auto sm = state_->fresh_genesis();
  std::map<Address, std::uint64_t> nonces;
  if (hash_kv(merged_state(*sm, nonces)) != blocks_.front().state_root)
    throw LedgerError("ReplayDivergence", "genesis state root differs");
  for (std::uint64_t h = 1; h < blocks_.size(); ++h) {
    const auto& b = blocks_[h];
    BlockContext ctx{b.height, b.timestamp_ms};
    sm->begin_block(ctx);
    auto executed = execute(*sm, nonces, ctx, b.transactions);
    if (executed.receipts != b.receipts || executed.events != b.events)
      throw LedgerError("ReplayDivergence", "receipts differ at height " + std::to_string(h));
    if (hash_kv(merged_state(*sm, nonces)) != b.state_root)
      throw LedgerError("ReplayDivergence", "state root differs at height " + std::to_string(h));
  }
  return sm;
}

std::uint64_t Ledger::tip_height() const {
  std::shared_lock lock(mu_);
  return records_.size() - 1;
}

std::uint64_t Ledger::tip_timestamp() const {
  std::shared_lock lock(mu_);
  return blocks_.back().timestamp_ms;
}

Block Ledger::block(std::uint64_t height) const {
  std::shared_lock lock(mu_);
  return blocks_.at(height);
}

std::vector<Bytes> Ledger::raw_records() const {
  std::shared_lock lock(mu_);
  return records_;
}

std::optional<TxLocation> Ledger::locate(const Hash256& tx_id) const {
  std::shared_lock lock(mu_);
  auto it = tx_index_.find(tx_id);
  if (it == tx_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Receipt> Ledger::receipt(const Hash256& tx_id) const {
  std::shared_lock lock(mu_);
  auto it = tx_index_.find(tx_id);
  if (it == tx_index_.end()) return std::nullopt;
  const auto& b = blocks_[it->second.height];
  if (it->second.index >= b.receipts.size()) return std::nullopt;
  return b.receipts[it->second.index];
}

std::vector<EventRecord> Ledger::events_for_upc(std::uint64_t upc) const {
  std::shared_lock lock(mu_);
  std::vector<EventRecord> out;
  for (const auto& b : blocks_)
    for (const auto& e : b.events)
      if (e.upc == upc) out.push_back(e);
  return out;
}

std::vector<EventRecord> Ledger::all_events() const {
  std::shared_lock lock(mu_);
  std::vector<EventRecord> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.events.begin(), b.events.end());
  return out;
}

Hash256 Ledger::state_root() const {
  std::shared_lock lock(mu_);
  return hash_kv(merged_state(*state_, nonces_));
}

}  // namespace pharmachain::ledger
