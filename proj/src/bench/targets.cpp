#include "interop/bench/targets.hpp"

#include <thread>

#include "interop/broker/api.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/transport/http_transport.hpp"

namespace interop::bench {

namespace status = transport::status;

Result classify(std::string_view s) {
  if (s == status::kOk) return Result::Success;
  if (s == status::kOverloaded) return Result::Dropped;
  if (s == status::kTimeout) return Result::Pending;
  return Result::Rejected;
}

namespace {

std::string stub_reply(const transport::WireMessage&) {
  return transport::reply_body(status::kOk);
}

bool setup_ok(std::string_view s) { return s == status::kOk || s == status::kConflict; }

}  // namespace

InprocTarget::InprocTarget(ledger::CapacityModel capacity, contracts::ContractOptions contracts)
    : transport_(std::make_shared<transport::SimTransport>()) {
  broker::BrokerOptions options;
  options.capacity = capacity;
  options.contracts = std::move(contracts);
  options.parallel_delivery = false;
  broker_ = std::make_unique<broker::Broker>(options, transport_, clock_,
                                             broker::Broker::Drive::Manual);
}

void InprocTarget::provision(const Setup& setup) {
  connectors::FabricAdapter adapter;
  for (const auto& s : setup.subscribers) transport_->serve(adapter.endpoint(s), stub_reply);
  for (const auto& step : setup.steps) {
    std::string error;
    auto tx = broker::to_transaction(step, error);
    if (!tx) throw std::runtime_error("setup request rejected: " + error);
    tx->submitted_at = now_;
    bool done = false;
    ledger::TxReceipt receipt;
    broker_->submit(std::move(*tx), [&](ledger::TxReceipt r) {
      receipt = std::move(r);
      done = true;
    });
    while (!done) {
      const auto next = broker_->next_event_time();
      if (!next) throw std::logic_error("setup transaction never terminated");
      broker_->advance(*next);
      now_ = std::max(now_, *next);
    }
    const auto s = broker::reply_status(receipt);
    if (!setup_ok(s)) throw std::runtime_error("setup step failed: " + receipt.reason);
  }
}

std::vector<Outcome> InprocTarget::run_round(const std::vector<Request>& requests,
                                             Nanos drain_timeout) {
  struct State {
    std::vector<Outcome> out;
    std::size_t remaining = 0;
  };
  auto state = std::make_shared<State>();
  const Nanos start = now_;
  state->out.resize(requests.size());
  state->remaining = requests.size();
  for (std::size_t i = 0; i < requests.size(); ++i) {
    state->out[i].submitted_at = start + requests[i].offset;
    state->out[i].worker = requests[i].worker;
  }
  const Nanos deadline =
      start + (requests.empty() ? 0 : requests.back().offset) + drain_timeout;

  std::size_t next = 0;
  while (next < requests.size() || state->remaining > 0) {
    const auto event = broker_->next_event_time();
    if (next < requests.size() && (!event || state->out[next].submitted_at <= *event)) {
      const auto i = next++;
      auto& o = state->out[i];
      now_ = std::max(now_, o.submitted_at);
      std::string error;
      auto tx = broker::to_transaction(requests[i].message, error);
      if (!tx) {
        o.result = Result::Rejected;
        o.finished_at = o.submitted_at;
        --state->remaining;
        continue;
      }
      tx->submitted_at = o.submitted_at;
      broker_->submit(std::move(*tx), [state, i](ledger::TxReceipt r) {
        auto& slot = state->out[i];
        slot.result = classify(broker::reply_status(r));
        slot.finished_at = r.completed_at;
        slot.latency = r.latency_ns;
        --state->remaining;
      });
      continue;
    }
    if (!event || *event > deadline) break;
    broker_->advance(*event);
    now_ = std::max(now_, *event);
  }
  if (state->remaining > 0) now_ = std::max(now_, deadline);
  // Late completions of pending requests must not touch the returned copy.
  return state->out;
}

UrlTarget::UrlTarget(transport::Endpoint broker)
    : transport_(std::make_shared<transport::HttpTransport>()),
      broker_(std::move(broker)),
      origin_(clock_.now()) {}

UrlTarget::~UrlTarget() {
  for (const auto& ep : stubs_) transport_->unserve(ep);
}

Nanos UrlTarget::now() const { return clock_.now() - origin_; }

void UrlTarget::provision(const Setup& setup) {
  connectors::FabricAdapter adapter;
  for (const auto& s : setup.subscribers) {
    const auto ep = adapter.endpoint(s);
    transport_->serve(ep, stub_reply);
    stubs_.push_back(ep);
  }
  broker::BrokerClient client(transport_, broker_, connectors::RetryPolicy{}, "bench");
  for (const auto& step : setup.steps) {
    broker::BrokerReply reply;
    try {
      reply = client.call(step.kind, Json::parse(step.body));
    } catch (const transport::TransportError& e) {
      throw TargetUnreachable(std::string("broker unreachable: ") + e.what());
    }
    if (!setup_ok(reply.status)) {
      throw std::runtime_error("setup step failed: " + reply.status + " " + reply.reason());
    }
  }
}

std::vector<Outcome> UrlTarget::run_round(const std::vector<Request>& requests,
                                          Nanos drain_timeout) {
  std::vector<Outcome> out(requests.size());
  const Nanos start = now();
  const auto deadline = std::chrono::milliseconds(
      std::max<Nanos>(1, drain_timeout / kNanosPerMilli));
  int workers = 1;
  for (const auto& r : requests) workers = std::max(workers, r.worker + 1);

  std::atomic<std::uint64_t> unreachable{0};
  auto worker = [&](int w) {
    std::vector<std::thread> senders;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      if (requests[i].worker != w) continue;
      const auto at = start + requests[i].offset;
      const auto wait = at - now();
      if (wait > 0) std::this_thread::sleep_for(std::chrono::nanoseconds(wait));
      senders.emplace_back([&, i] {
        auto& o = out[i];
        o.worker = w;
        o.submitted_at = now();
        auto msg = requests[i].message;
        msg.correlation_id = "bench-" + std::to_string(++next_id_);
        try {
          const auto reply = transport_->send(broker_, msg, deadline);
          const auto body = parse_object(reply.body);
          o.result = classify(body ? body->value("status", "") : "");
          o.finished_at = now();
          o.latency = std::max<Nanos>(1, o.finished_at - o.submitted_at);
        } catch (const transport::TransportError& e) {
          if (e.code() == transport::TransportErrc::ConnectionRefused) ++unreachable;
          o.result = e.code() == transport::TransportErrc::Malformed ? Result::Rejected
                                                                     : Result::Pending;
        }
      });
    }
    for (auto& t : senders) t.join();
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  if (unreachable == requests.size() && !requests.empty()) {
    throw TargetUnreachable("broker refused every request");
  }
  return out;
}

}  // namespace interop::bench
