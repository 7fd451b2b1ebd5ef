#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "interop/bench/workload.hpp"
#include "interop/broker/broker.hpp"
#include "interop/common/clock.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/transport/sim_transport.hpp"

namespace interop::bench {

enum class Result { Success, Rejected, Dropped, Pending };

Result classify(std::string_view reply_status);

/// One scheduled request. Times are on the target's timeline.
struct Outcome {
  Nanos submitted_at = 0;
  Nanos finished_at = 0;
  Nanos latency = 0;
  Result result = Result::Pending;
  int worker = 0;
};

class TargetUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Target {
 public:
  virtual ~Target() = default;

  virtual std::string name() const = 0;
  /// Serves the subscriber stubs and runs the setup requests.
  virtual void provision(const Setup& setup) = 0;
  virtual Nanos now() const = 0;
  /// Issues every request on schedule from now(); returns outcomes in
  /// request order. Requests still open `drain_timeout` after the last
  /// scheduled send are reported Pending.
  virtual std::vector<Outcome> run_round(const std::vector<Request>& requests,
                                         Nanos drain_timeout) = 0;
};

/// In-process broker on a virtual timeline: a discrete-event run, so
/// results depend only on the capacity model and the schedule.
class InprocTarget final : public Target {
 public:
  explicit InprocTarget(ledger::CapacityModel capacity, contracts::ContractOptions contracts = {});

  std::string name() const override { return "inproc"; }
  void provision(const Setup& setup) override;
  Nanos now() const override { return now_; }
  std::vector<Outcome> run_round(const std::vector<Request>& requests,
                                 Nanos drain_timeout) override;

  broker::Broker& broker() { return *broker_; }

 private:
  std::shared_ptr<transport::SimTransport> transport_;
  ManualClock clock_;
  std::unique_ptr<broker::Broker> broker_;
  Nanos now_ = 0;
};

/// A broker reached over HTTP, in real time. Workers issue requests open
/// loop from their own threads.
class UrlTarget final : public Target {
 public:
  explicit UrlTarget(transport::Endpoint broker);
  ~UrlTarget() override;

  std::string name() const override { return "url"; }
  void provision(const Setup& setup) override;
  Nanos now() const override;
  std::vector<Outcome> run_round(const std::vector<Request>& requests,
                                 Nanos drain_timeout) override;

 private:
  std::shared_ptr<transport::Transport> transport_;
  transport::Endpoint broker_;
  SteadyClock clock_;
  Nanos origin_;
  std::vector<transport::Endpoint> stubs_;
  std::atomic<std::uint64_t> next_id_{0};
};

}  // namespace interop::bench
