#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "interop/common/clock.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/contracts/records.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/ledger/driver.hpp"
#include "interop/ledger/ledger.hpp"
#include "interop/transport/wire.hpp"

namespace interop::broker {

struct BrokerOptions {
  ledger::CapacityModel capacity;
  contracts::ContractOptions contracts;
  connectors::RetryPolicy notifier;
  bool parallel_delivery = true;
  int delivery_workers = 4;
};

/// Reply status for a terminal receipt.
std::string_view reply_status(const ledger::TxReceipt& receipt);

/// Reply body for a terminal receipt: status, tx_id, block_height, reason,
/// deliveries and result (the operation's JSON output).
std::string reply_for(const ledger::TxReceipt& receipt);

/// Maps a request onto a ledger transaction. Returns nullopt and sets
/// `error` to the bad_request reason when the request is not accepted.
std::optional<ledger::Transaction> to_transaction(const transport::WireMessage& request,
                                                  std::string& error);

/// The broker blockchain: ledger, topics and connector contracts, and
/// post-commit notification delivery.
///
/// Threaded mode runs the ledger in real time on `clock` and delivers
/// notifications on a small worker pool. Manual mode leaves time to the
/// caller (submit + advance); deliveries run inline.
class Broker {
 public:
  enum class Drive { Manual, Threaded };
  using Callback = std::function<void(ledger::TxReceipt)>;

  Broker(BrokerOptions options, std::shared_ptr<transport::Transport> transport,
         const Clock& clock, Drive drive, ledger::BlockSink* sink = nullptr);
  ~Broker();

  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  void start();
  void stop();

  /// Replays committed blocks into a fresh broker before start().
  void restore(std::span<const ledger::Block> blocks);

  /// `done` is called once, with deliveries filled in for publishes.
  void submit(ledger::Transaction tx, Callback done);

  /// Submits and waits for the terminal receipt. In manual mode the ledger
  /// is advanced event by event until the transaction terminates.
  ledger::TxReceipt call(ledger::Transaction tx);

  // Manual mode.
  void advance(Nanos now);
  std::optional<Nanos> next_event_time() const { return ledger_.next_event_time(); }

  /// Wire entry point; total over every kind and body.
  std::string handle_request(const transport::WireMessage& request);

  ledger::Ledger& ledger() { return ledger_; }
  const ledger::Ledger& ledger() const { return ledger_; }
  connectors::Notifier& notifier() { return notifier_; }
  const BrokerOptions& options() const { return options_; }

 private:
  struct Pending {
    ledger::TxReceipt receipt;
    Callback done;
  };

  void on_receipts(std::vector<ledger::TxReceipt> receipts);
  void finish(ledger::TxReceipt receipt, Callback done);
  void deliver(ledger::TxReceipt& receipt);
  void delivery_loop();
  std::string next_tx_id();

  const BrokerOptions options_;
  const Clock& clock_;
  const Drive drive_;
  ledger::Ledger ledger_;
  connectors::Notifier notifier_;
  std::optional<ledger::LedgerDriver> driver_;

  std::mutex mu_;
  std::map<std::string, Callback> callbacks_;
  std::uint64_t next_id_ = 0;

  std::mutex manual_mu_;

  std::mutex work_mu_;
  std::condition_variable work_cv_;
  std::deque<Pending> work_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace interop::broker
