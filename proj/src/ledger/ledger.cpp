#include "interop/ledger/ledger.hpp"

#include <algorithm>
#include <cmath>

namespace interop::ledger {

namespace {

Nanos service_ns(double units, double rate) {
  return static_cast<Nanos>(std::llround(units / rate * static_cast<double>(kNanosPerSecond)));
}

Nanos latency(Nanos submitted, Nanos done) { return std::max<Nanos>(1, done - submitted); }

}  // namespace

RecoveryError::RecoveryError(std::uint64_t height, const std::string& what)
    : std::runtime_error("recovery failed at height " + std::to_string(height) + ": " + what),
      height_(height) {}

Ledger::Ledger(CapacityModel model, ContractSet contracts, BlockSink* sink, bool keep_blocks)
    : model_(model), contracts_(std::move(contracts)), sink_(sink), keep_blocks_(keep_blocks) {
  model_.validate();
}

Ledger::Execution Ledger::execute(const Transaction& tx, const WriteSet* staged,
                                  bool read_only) const {
  Execution ex;
  const auto* contract = contracts_.find(tx.contract);
  TxContext ctx(tx, state_, staged, contracts_, read_only);
  try {
    ex.payload = contract->execute(ctx, tx.operation, tx.args);
    ex.writes = ctx.take_writes();
    ex.events = ctx.take_events();
  } catch (const ContractError& e) {
    ex.valid = false;
    ex.code = e.code();
    ex.reason = e.what();
  } catch (const std::exception& e) {
    ex.valid = false;
    ex.code = RejectCode::Internal;
    ex.reason = e.what();
  }
  ex.fanout = ctx.fanout();
  return ex;
}

TxReceipt Ledger::immediate(const Transaction& tx, TxStatus status, RejectCode code,
                            std::string reason, Nanos at) {
  TxReceipt r;
  r.tx_id = tx.tx_id;
  r.status = status;
  r.code = code;
  r.reason = std::move(reason);
  r.completed_at = at;
  r.latency_ns = latency(tx.submitted_at, at);
  count(r);
  return r;
}

void Ledger::count(const TxReceipt& r) {
  switch (r.status) {
    case TxStatus::Committed: ++stats_.committed; break;
    case TxStatus::QueryOk: ++stats_.query_ok; break;
    case TxStatus::Rejected: ++stats_.rejected; break;
    case TxStatus::Dropped: ++stats_.dropped; break;
  }
}

std::vector<TxReceipt> Ledger::submit(Transaction tx) {
  std::lock_guard lock(mu_);
  std::vector<TxReceipt> out;
  process_until(tx.submitted_at, out);
  const Nanos arrival = std::max(tx.submitted_at, now_);
  now_ = arrival;
  ++stats_.submitted;

  const auto* contract = contracts_.find(tx.contract);
  if (!seen_ids_.insert(tx.tx_id).second) {
    out.push_back(immediate(tx, TxStatus::Rejected, RejectCode::BadRequest, "duplicate tx_id",
                            arrival));
    return out;
  }
  if (!contract || !contract->has_operation(tx.operation)) {
    out.push_back(immediate(tx, TxStatus::Rejected, RejectCode::BadRequest, "unknown operation",
                            arrival));
    return out;
  }

  if (tx.kind == TxKind::Query) {
    auto ex = execute(tx, nullptr, true);
    const Nanos ready =
        std::max(arrival, query_free_at_) + service_ns(1.0, model_.query_service_rate);
    query_free_at_ = ready;
    TxReceipt r;
    r.tx_id = tx.tx_id;
    r.completed_at = ready;
    r.latency_ns = latency(tx.submitted_at, ready);
    if (ex.valid) {
      r.status = TxStatus::QueryOk;
      r.payload = std::move(ex.payload);
    } else {
      r.status = TxStatus::Rejected;
      r.code = ex.code;
      r.reason = std::move(ex.reason);
    }
    queries_.push_back({std::move(r), ready});
    return out;
  }

  if (pending_locked() >= model_.queue_capacity) {
    penalty_debt_ += model_.overload_penalty_units;
    out.push_back(immediate(tx, TxStatus::Dropped, RejectCode::None, "overload", arrival));
    return out;
  }
  queue_.push_back({std::move(tx), arrival});
  try_start_service(arrival);
  return out;
}

std::vector<TxReceipt> Ledger::advance(Nanos now) {
  std::lock_guard lock(mu_);
  std::vector<TxReceipt> out;
  process_until(now, out);
  return out;
}

std::optional<Nanos> Ledger::next_event_time() const {
  std::lock_guard lock(mu_);
  return next_event_locked();
}

std::optional<Nanos> Ledger::next_event_locked() const {
  std::optional<Nanos> next;
  auto consider = [&](Nanos t) {
    if (!next || t < *next) next = t;
  };
  if (!queries_.empty()) consider(queries_.front().ready);
  if (in_service_) consider(in_service_->finish);
  if (!open_block_.empty()) consider(open_deadline_);
  return next;
}

std::size_t Ledger::pending_locked() const {
  return queue_.size() + (in_service_ ? 1 : 0) + open_block_.size();
}

void Ledger::process_until(Nanos t, std::vector<TxReceipt>& out) {
  while (true) {
    const auto next = next_event_locked();
    if (!next || *next > t) break;
    now_ = std::max(now_, *next);
    if (!queries_.empty() && queries_.front().ready == *next) {
      auto r = std::move(queries_.front().receipt);
      queries_.pop_front();
      count(r);
      out.push_back(std::move(r));
    } else if (in_service_ && in_service_->finish == *next) {
      finish_service(out);
      try_start_service(*next);
    } else {
      cut_block(*next, out);
    }
  }
  now_ = std::max(now_, t);
}

void Ledger::try_start_service(Nanos t) {
  if (in_service_ || queue_.empty()) return;
  auto q = std::move(queue_.front());
  queue_.pop_front();
  const Nanos start = std::max(t, q.arrival);
  Serviced s;
  s.exec = execute(q.tx, &open_writes_, false);
  s.units = model_.invoke_cost(s.exec.fanout);
  const double charged = s.units + penalty_debt_;
  penalty_debt_ = 0.0;
  s.finish = start + service_ns(charged, model_.invoke_service_rate);
  s.tx = std::move(q.tx);
  in_service_ = std::move(s);
}

void Ledger::finish_service(std::vector<TxReceipt>& out) {
  auto s = std::move(*in_service_);
  in_service_.reset();
  const Nanos at = s.finish;
  if (s.exec.valid) {
    for (auto& [k, v] : s.exec.writes) open_writes_.insert_or_assign(k, std::move(v));
    s.exec.writes.clear();
  }
  if (open_block_.empty()) open_deadline_ = at + model_.block_interval_ms * kNanosPerMilli;
  open_block_.push_back(std::move(s));
  if (open_block_.size() >= model_.max_block_size) cut_block(at, out);
}

void Ledger::cut_block(Nanos t, std::vector<TxReceipt>& out) {
  Block block;
  block.height = height_ + 1;
  block.prev_hash = head_;
  block.committed_at = t;
  block.entries.reserve(open_block_.size());
  for (const auto& s : open_block_) block.entries.push_back({s.tx, s.exec.valid});

  state_.apply(open_writes_);
  open_writes_.clear();
  height_ = block.height;
  head_ = block_digest(block);
  if (sink_) sink_->append(block);

  for (auto& s : open_block_) {
    TxReceipt r;
    r.tx_id = s.tx.tx_id;
    r.completed_at = t;
    r.latency_ns = latency(s.tx.submitted_at, t);
    r.block_height = block.height;
    r.service_units = s.units;
    if (s.exec.valid) {
      r.status = TxStatus::Committed;
      r.payload = std::move(s.exec.payload);
      r.events = std::move(s.exec.events);
    } else {
      r.status = TxStatus::Rejected;
      r.code = s.exec.code;
      r.reason = std::move(s.exec.reason);
    }
    count(r);
    out.push_back(std::move(r));
  }
  open_block_.clear();
  if (keep_blocks_) blocks_.push_back(std::move(block));
}

void Ledger::restore(std::span<const Block> blocks) {
  std::lock_guard lock(mu_);
  for (const auto& block : blocks) {
    if (block.height != height_ + 1) throw RecoveryError(block.height, "non-contiguous height");
    if (block.prev_hash != head_) throw RecoveryError(block.height, "prev_hash mismatch");
    if (block.entries.empty()) throw RecoveryError(block.height, "empty block");
    WriteSet staged;
    for (const auto& e : block.entries) {
      const auto* contract = contracts_.find(e.tx.contract);
      if (e.tx.kind != TxKind::Invoke || !contract || !contract->has_operation(e.tx.operation)) {
        throw RecoveryError(block.height, "block holds a non-invoke or unknown operation");
      }
      auto ex = execute(e.tx, &staged, false);
      if (ex.valid != e.valid) throw RecoveryError(block.height, "re-execution diverged");
      for (auto& [k, v] : ex.writes) staged.insert_or_assign(k, std::move(v));
      seen_ids_.insert(e.tx.tx_id);
    }
    state_.apply(staged);
    height_ = block.height;
    head_ = block_digest(block);
    if (keep_blocks_) blocks_.push_back(block);
  }
}

WorldState Ledger::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::uint64_t Ledger::height() const {
  std::lock_guard lock(mu_);
  return height_;
}

Digest Ledger::head_digest() const {
  std::lock_guard lock(mu_);
  return head_;
}

std::vector<Block> Ledger::blocks() const {
  std::lock_guard lock(mu_);
  return blocks_;
}

std::size_t Ledger::pending_invokes() const {
  std::lock_guard lock(mu_);
  return pending_locked();
}

LedgerStats Ledger::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace interop::ledger
