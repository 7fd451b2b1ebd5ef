#include "interop/transport/sim_transport.hpp"

#include <thread>

namespace interop::transport {

using Clock = std::chrono::steady_clock;

WireMessage SimTransport::send(const Endpoint& to, const WireMessage& msg,
                              std::chrono::milliseconds deadline) {
  std::shared_ptr<Binding> binding;
  std::chrono::microseconds delay{0};
  bool dropped = false;
  {
    std::lock_guard lock(mu_);
    auto it = bindings_.find(to.key());
    if (it == bindings_.end()) {
      throw TransportError(TransportErrc::ConnectionRefused, "no endpoint at " + to.key());
    }
    binding = it->second;
    const auto& f = binding->faults;
    delay = f.latency;
    if (f.jitter.count() > 0) {
      delay += std::chrono::microseconds(rng_() % static_cast<std::uint64_t>(f.jitter.count() + 1));
    }
    if (f.drop_probability > 0.0) {
      dropped = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < f.drop_probability;
    }
  }
  ++traffic_;
  const auto start = Clock::now();
  if (dropped || delay >= deadline) {
    std::this_thread::sleep_for(deadline);
    throw TransportError(TransportErrc::Timeout, "no reply from " + to.key());
  }
  if (delay.count() > 0) std::this_thread::sleep_for(delay);

  WireMessage request = msg;
  auto body = invoke_handler(binding->handler, request);
  if (Clock::now() - start > deadline) {
    throw TransportError(TransportErrc::Timeout, "reply from " + to.key() + " missed deadline");
  }
  if (!well_formed_reply(body)) {
    throw TransportError(TransportErrc::Malformed, "reply body is not a status object");
  }
  return {MessageKind::Reply, msg.correlation_id, std::move(body)};
}

void SimTransport::serve(const Endpoint& at, Handler handler, FaultSpec faults) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = bindings_.try_emplace(at.key());
  if (!inserted) throw TransportError(TransportErrc::AlreadyBound, at.key());
  it->second = std::make_shared<Binding>(Binding{std::move(handler), faults});
}

void SimTransport::unserve(const Endpoint& at) {
  std::lock_guard lock(mu_);
  bindings_.erase(at.key());
}

void SimTransport::set_faults(const Endpoint& at, FaultSpec faults) {
  std::lock_guard lock(mu_);
  auto it = bindings_.find(at.key());
  if (it == bindings_.end()) return;
  it->second = std::make_shared<Binding>(Binding{it->second->handler, faults});
}

}  // namespace interop::transport
