#include "interop/ledger/driver.hpp"

namespace interop::ledger {

LedgerDriver::LedgerDriver(Ledger& ledger, const Clock& clock, Sink sink)
    : ledger_(ledger), clock_(clock), sink_(std::move(sink)) {}

LedgerDriver::~LedgerDriver() { stop(); }

void LedgerDriver::start() {
  std::lock_guard lock(mu_);
  if (thread_.joinable()) return;
  stop_ = false;
  thread_ = std::thread([this] { loop(); });
}

void LedgerDriver::stop() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void LedgerDriver::submit(Transaction tx) {
  if (tx.submitted_at == 0) tx.submitted_at = clock_.now();
  auto done = ledger_.submit(std::move(tx));
  if (!done.empty()) sink_(std::move(done));
  {
    std::lock_guard lock(mu_);
    kicked_ = true;
  }
  cv_.notify_all();
}

void LedgerDriver::loop() {
  std::unique_lock lock(mu_);
  while (!stop_) {
    lock.unlock();
    auto done = ledger_.advance(clock_.now());
    if (!done.empty()) sink_(std::move(done));
    const auto next = ledger_.next_event_time();
    lock.lock();
    if (stop_) break;
    if (kicked_) {
      kicked_ = false;
      continue;
    }
    if (!next) {
      cv_.wait(lock, [this] { return stop_ || kicked_; });
    } else {
      const auto wait = std::max<Nanos>(0, *next - clock_.now());
      cv_.wait_for(lock, std::chrono::nanoseconds(wait), [this] { return stop_ || kicked_; });
    }
    kicked_ = false;
  }
}

}  // namespace interop::ledger
