#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "interop/common/clock.hpp"
#include "interop/contracts/records.hpp"
#include "interop/transport/wire.hpp"

namespace interop::bench {

enum class Operation { CreateTopic, QueryTopic, SubscribeToTopic, UnsubscribeFromTopic, PublishToTopic };

std::string_view to_string(Operation op);
std::optional<Operation> parse_operation(std::string_view text);

struct Workload {
  Operation operation = Operation::QueryTopic;
  std::uint64_t seed = 1;
  // Subscribers per topic for publish workloads.
  std::size_t fanout = 0;
  std::size_t topics = 10;
  std::size_t subscribers = 20;
  std::size_t message_bytes = 64;
};

struct RoundSpec {
  double send_rate = 1.0;  // TPS
  double duration_s = 5.0;
  int workers = 1;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Chains, topics and subscriptions a workload needs before its rounds.
struct Setup {
  contracts::BlockchainRecord publisher;
  std::vector<contracts::BlockchainRecord> subscribers;
  std::vector<std::string> topics;
  // Broker requests, executed in order; each must succeed.
  std::vector<transport::WireMessage> steps;
};

/// `prefix` namespaces every id; subscriber i listens on base_port + i.
Setup make_setup(const Workload& w, std::string_view prefix, std::uint16_t base_port);

/// Seeded request stream for one workload.
class ArgGenerator {
 public:
  ArgGenerator(const Workload& w, const Setup& setup, std::string prefix);

  transport::WireMessage next();

 private:
  Bytes message();
  std::size_t pick(std::size_t n);

  Workload workload_;
  std::string prefix_;
  std::string publisher_;
  std::vector<std::string> subscribers_;
  std::vector<std::string> topics_;
  std::mt19937_64 rng_;
  std::uint64_t created_ = 0;
};

struct Request {
  Nanos offset = 0;  // from round start
  int worker = 0;
  transport::WireMessage message;
};

/// Open-loop uniform schedule: request i at i/send_rate, owned by worker
/// i mod workers.
std::vector<Request> schedule(const RoundSpec& round, ArgGenerator& gen);

}  // namespace interop::bench
