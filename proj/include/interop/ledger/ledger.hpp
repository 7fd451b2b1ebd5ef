#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "interop/common/digest.hpp"
#include "interop/ledger/block.hpp"
#include "interop/ledger/block_log.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/ledger/context.hpp"
#include "interop/ledger/types.hpp"
#include "interop/ledger/world_state.hpp"

namespace interop::ledger {

class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(std::uint64_t height, const std::string& what);
  std::uint64_t height() const { return height_; }

 private:
  std::uint64_t height_;
};

struct LedgerStats {
  std::uint64_t submitted = 0;
  std::uint64_t committed = 0;
  std::uint64_t query_ok = 0;
  std::uint64_t rejected = 0;
  std::uint64_t dropped = 0;

  std::uint64_t terminal() const { return committed + query_ok + rejected + dropped; }
};

/// Single-node permissioned ledger: world state, block log and the
/// invoke/query pipelines.
///
/// The ledger is a discrete-event machine on the Nanos timeline. It never
/// reads a clock itself: `submit` takes the arrival time from
/// `tx.submitted_at`, and `advance(now)` processes every pipeline event up to
/// `now`. Both return the receipts that became terminal. A real-time driver
/// (LedgerDriver) or a simulation loop decides when time moves.
///
/// Invoke path: admission (bounded queue) -> service (execution against the
/// open block's view, cost per CapacityModel) -> ordering into the open
/// block -> commit when the block is full or `block_interval_ms` after its
/// first transaction. Query path: executed immediately against committed
/// state, answered after the query server's service time.
///
/// All methods are thread-safe; one mutex serializes them.
class Ledger {
 public:
  Ledger(CapacityModel model, ContractSet contracts, BlockSink* sink = nullptr,
         bool keep_blocks = true);

  std::vector<TxReceipt> submit(Transaction tx);
  std::vector<TxReceipt> advance(Nanos now);
  std::optional<Nanos> next_event_time() const;

  /// Re-executes committed blocks over the current state (normally genesis).
  /// Throws RecoveryError naming the first inconsistent height.
  void restore(std::span<const Block> blocks);

  WorldState state() const;
  std::uint64_t height() const;
  Digest head_digest() const;
  std::vector<Block> blocks() const;
  std::size_t pending_invokes() const;
  LedgerStats stats() const;
  const CapacityModel& model() const { return model_; }

 private:
  struct Execution {
    bool valid = true;
    RejectCode code = RejectCode::None;
    std::string reason;
    Bytes payload;
    WriteSet writes;
    std::vector<TxEvent> events;
    std::optional<std::size_t> fanout;
  };

  struct Queued {
    Transaction tx;
    Nanos arrival = 0;
  };

  struct Serviced {
    Transaction tx;
    Execution exec;
    double units = 0.0;
    Nanos finish = 0;
  };

  struct QueryDone {
    TxReceipt receipt;
    Nanos ready = 0;
  };

  Execution execute(const Transaction& tx, const WriteSet* staged, bool read_only) const;
  void process_until(Nanos t, std::vector<TxReceipt>& out);
  void try_start_service(Nanos t);
  void finish_service(std::vector<TxReceipt>& out);
  void cut_block(Nanos t, std::vector<TxReceipt>& out);
  std::optional<Nanos> next_event_locked() const;
  std::size_t pending_locked() const;
  void count(const TxReceipt& r);
  TxReceipt immediate(const Transaction& tx, TxStatus status, RejectCode code, std::string reason,
                      Nanos at);

  const CapacityModel model_;
  const ContractSet contracts_;
  BlockSink* sink_;
  const bool keep_blocks_;

  mutable std::mutex mu_;
  Nanos now_ = 0;
  WorldState state_;
  Digest head_ = kZeroDigest;
  std::uint64_t height_ = 0;
  std::vector<Block> blocks_;
  std::unordered_set<std::string> seen_ids_;
  LedgerStats stats_;

  std::deque<Queued> queue_;
  std::optional<Serviced> in_service_;
  double penalty_debt_ = 0.0;
  std::vector<Serviced> open_block_;
  WriteSet open_writes_;
  Nanos open_deadline_ = 0;

  std::deque<QueryDone> queries_;
  Nanos query_free_at_ = 0;
};

}  // namespace interop::ledger
