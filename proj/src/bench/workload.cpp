#include "interop/bench/workload.hpp"

#include <cmath>
#include <stdexcept>

#include "interop/broker/api.hpp"
#include "interop/connectors/notifier.hpp"

namespace interop::bench {

using transport::MessageKind;
using transport::WireMessage;

namespace {

constexpr std::string_view kOperationNames[] = {"CreateTopic", "QueryTopic", "SubscribeToTopic",
                                                "UnsubscribeFromTopic", "PublishToTopic"};

WireMessage request(MessageKind kind, const Json& body) { return {kind, "", canonical(body)}; }

contracts::BlockchainRecord chain(std::string id, contracts::Role role, std::uint16_t port) {
  contracts::BlockchainRecord r;
  r.chain_id = id;
  r.name = std::move(id);
  r.chain_type = std::string(contracts::kFabricType);
  r.server_ip = "127.0.0.1";
  r.port = port;
  r.extra = {{"channel", "interop"}, {"chaincode", "connector"}};
  r.role = role;
  return r;
}

}  // namespace

std::string_view to_string(Operation op) { return kOperationNames[static_cast<int>(op)]; }

std::optional<Operation> parse_operation(std::string_view text) {
  for (int i = 0; i < 5; ++i) {
    if (kOperationNames[i] == text) return static_cast<Operation>(i);
  }
  return std::nullopt;
}

void RoundSpec::validate() const {
  if (!(send_rate > 0.0)) throw std::invalid_argument("send_rate must be > 0");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration_s must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

Setup make_setup(const Workload& w, std::string_view prefix, std::uint16_t base_port) {
  const std::string p(prefix);
  Setup s;
  s.publisher = chain(p + "-pub", contracts::Role::Publisher, base_port);
  s.steps.push_back(request(MessageKind::EnrollReq, broker::api::enroll(s.publisher)));
  const auto n_subs = std::max(w.subscribers, w.fanout);
  for (std::size_t i = 0; i < n_subs; ++i) {
    s.subscribers.push_back(chain(p + "-sub-" + std::to_string(i), contracts::Role::Subscriber,
                                  static_cast<std::uint16_t>(base_port + 1 + i)));
    s.steps.push_back(request(MessageKind::EnrollReq, broker::api::enroll(s.subscribers.back())));
  }
  for (std::size_t j = 0; j < std::max<std::size_t>(1, w.topics); ++j) {
    s.topics.push_back(p + "-topic-" + std::to_string(j));
    s.steps.push_back(request(MessageKind::CreateTopicReq,
                              broker::api::create_topic(s.topics.back(), "bench topic",
                                                        s.publisher.chain_id, "initial")));
  }
  std::size_t subscribed = 0;
  if (w.operation == Operation::PublishToTopic) subscribed = w.fanout;
  if (w.operation == Operation::UnsubscribeFromTopic) subscribed = n_subs;
  for (const auto& t : s.topics) {
    for (std::size_t i = 0; i < subscribed; ++i) {
      s.steps.push_back(request(MessageKind::SubscribeReq,
                                broker::api::subscribe(t, s.subscribers[i].chain_id)));
    }
  }
  return s;
}

ArgGenerator::ArgGenerator(const Workload& w, const Setup& setup, std::string prefix)
    : workload_(w),
      prefix_(std::move(prefix)),
      publisher_(setup.publisher.chain_id),
      topics_(setup.topics),
      rng_(w.seed) {
  for (const auto& s : setup.subscribers) subscribers_.push_back(s.chain_id);
  if (subscribers_.empty()) subscribers_.push_back(publisher_);
}

std::size_t ArgGenerator::pick(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

Bytes ArgGenerator::message() {
  static constexpr std::string_view kAlphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  Bytes out(workload_.message_bytes, ' ');
  for (auto& c : out) c = kAlphabet[pick(kAlphabet.size())];
  return out;
}

WireMessage ArgGenerator::next() {
  switch (workload_.operation) {
    case Operation::CreateTopic: {
      const auto id = prefix_ + "-new-" + std::to_string(created_++);
      return request(MessageKind::CreateTopicReq,
                     broker::api::create_topic(id, "bench topic", publisher_, message()));
    }
    case Operation::QueryTopic:
      return request(MessageKind::QueryReq, broker::api::query_topic(topics_[pick(topics_.size())]));
    case Operation::SubscribeToTopic: {
      const auto& t = topics_[pick(topics_.size())];
      return request(MessageKind::SubscribeReq,
                     broker::api::subscribe(t, subscribers_[pick(subscribers_.size())]));
    }
    case Operation::UnsubscribeFromTopic: {
      const auto& t = topics_[pick(topics_.size())];
      return request(MessageKind::UnsubscribeReq,
                     broker::api::unsubscribe(t, subscribers_[pick(subscribers_.size())]));
    }
    case Operation::PublishToTopic: {
      const auto& t = topics_[pick(topics_.size())];
      return request(MessageKind::PublishReq, broker::api::publish(t, message(), publisher_));
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Request> schedule(const RoundSpec& round, ArgGenerator& gen) {
  round.validate();
  const auto n = static_cast<std::size_t>(std::llround(round.send_rate * round.duration_s));
  std::vector<Request> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto offset = static_cast<Nanos>(
        std::llround(static_cast<double>(i) * kNanosPerSecond / round.send_rate));
    out.push_back({offset, static_cast<int>(i % round.workers), gen.next()});
  }
  return out;
}

}  // namespace interop::bench
