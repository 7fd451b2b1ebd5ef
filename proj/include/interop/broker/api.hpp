#pragma once

#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>

#include "interop/common/json.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/contracts/records.hpp"
#include "interop/transport/wire.hpp"

namespace interop::broker {

/// Request bodies of the broker wire API.
namespace api {
Json enroll(const contracts::BlockchainRecord& record);
Json create_topic(std::string_view topic_id, std::string_view name, std::string_view publisher,
                  const Bytes& message);
Json subscribe(std::string_view topic_id, std::string_view subscriber);
Json unsubscribe(std::string_view topic_id, std::string_view subscriber);
Json publish(std::string_view topic_id, const Bytes& message, std::string_view caller);
Json query_topic(std::string_view topic_id);
Json query_all_topics();
Json query_blockchain(std::string_view chain_id);
Json query_all_blockchains();
}  // namespace api

struct BrokerReply {
  std::string status;
  Json body;

  bool ok() const { return status == transport::status::kOk; }
  std::string reason() const { return body.value("reason", std::string()); }
};

/// Non-ok reply surfaced to a caller that required success.
class BrokerRejected : public std::runtime_error {
 public:
  explicit BrokerRejected(const BrokerReply& reply)
      : std::runtime_error(reply.status + ": " + reply.reason()),
        status_(reply.status),
        reason_(reply.reason()) {}
  const std::string& status() const { return status_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string status_;
  std::string reason_;
};

/// Client of a broker endpoint. Timeouts and refused connections are retried
/// per policy; the last TransportError is rethrown once attempts run out.
class BrokerClient {
 public:
  BrokerClient(std::shared_ptr<transport::Transport> transport, transport::Endpoint broker,
               connectors::RetryPolicy policy, std::string client_id);

  BrokerReply call(transport::MessageKind kind, const Json& body);

  /// Like call(), but throws BrokerRejected unless the status is ok.
  BrokerReply require(transport::MessageKind kind, const Json& body);

  int attempts_made() const { return attempts_made_.load(); }
  const transport::Endpoint& endpoint() const { return broker_; }

 private:
  std::shared_ptr<transport::Transport> transport_;
  transport::Endpoint broker_;
  connectors::RetryPolicy policy_;
  std::string client_id_;
  std::atomic<std::uint64_t> next_id_{0};
  std::atomic<int> attempts_made_{0};
};

}  // namespace interop::broker
