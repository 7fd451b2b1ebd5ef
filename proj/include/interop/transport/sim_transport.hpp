#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "interop/transport/wire.hpp"

namespace interop::transport {

/// Per-endpoint network behaviour of the simulated transport. `latency` is
/// the full round trip added before the handler runs; `jitter` adds a
/// uniform extra in [0, jitter].
struct FaultSpec {
  std::chrono::microseconds latency{0};
  std::chrono::microseconds jitter{0};
  double drop_probability = 0.0;
};

/// In-process transport. Handlers run on the sender's thread after the
/// configured delay; dropped requests surface as Timeout at the deadline.
class SimTransport final : public Transport {
 public:
  explicit SimTransport(std::uint64_t seed = 1) : rng_(seed) {}

  WireMessage send(const Endpoint& to, const WireMessage& msg,
                   std::chrono::milliseconds deadline) override;
  void serve(const Endpoint& at, Handler handler) override { serve(at, std::move(handler), {}); }
  void serve(const Endpoint& at, Handler handler, FaultSpec faults);
  void unserve(const Endpoint& at) override;

  void set_faults(const Endpoint& at, FaultSpec faults);

  /// Requests that reached a registered endpoint (including dropped ones).
  std::uint64_t traffic() const { return traffic_.load(); }

 private:
  struct Binding {
    Handler handler;
    FaultSpec faults;
  };

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Binding>> bindings_;
  std::mt19937_64 rng_;
  std::atomic<std::uint64_t> traffic_{0};
};

}  // namespace interop::transport
