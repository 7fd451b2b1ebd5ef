#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "interop/common/clock.hpp"
#include "interop/ledger/ledger.hpp"

namespace interop::ledger {

/// Runs a Ledger in real time: one committer thread sleeps until the next
/// pipeline event and advances the ledger to the clock. Receipts are handed
/// to `sink`, which may be called from the committer thread or from the
/// submitting thread (for receipts that terminate at admission).
class LedgerDriver {
 public:
  using Sink = std::function<void(std::vector<TxReceipt>)>;

  LedgerDriver(Ledger& ledger, const Clock& clock, Sink sink);
  ~LedgerDriver();

  LedgerDriver(const LedgerDriver&) = delete;
  LedgerDriver& operator=(const LedgerDriver&) = delete;

  void start();
  void stop();

  /// Stamps `submitted_at` from the clock when it is zero.
  void submit(Transaction tx);

 private:
  void loop();

  Ledger& ledger_;
  const Clock& clock_;
  Sink sink_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  bool kicked_ = false;
  std::thread thread_;
};

}  // namespace interop::ledger
