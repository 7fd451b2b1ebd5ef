#include "interop/broker/api.hpp"

#include <thread>

namespace interop::broker {

using transport::MessageKind;
using transport::TransportErrc;
using transport::TransportError;

namespace api {

Json enroll(const contracts::BlockchainRecord& record) { return Json{{"record", record.to_json()}}; }

Json create_topic(std::string_view topic_id, std::string_view name, std::string_view publisher,
                  const Bytes& message) {
  return Json{{"topic_id", topic_id},
              {"name", name},
              {"publisher", publisher},
              {"message_b64", base64_encode(message)}};
}

Json subscribe(std::string_view topic_id, std::string_view subscriber) {
  return Json{{"topic_id", topic_id}, {"subscriber", subscriber}};
}

Json unsubscribe(std::string_view topic_id, std::string_view subscriber) {
  return Json{{"topic_id", topic_id}, {"subscriber", subscriber}};
}

Json publish(std::string_view topic_id, const Bytes& message, std::string_view caller) {
  return Json{{"topic_id", topic_id}, {"message_b64", base64_encode(message)}, {"caller", caller}};
}

Json query_topic(std::string_view topic_id) {
  return Json{{"query", "topic"}, {"topic_id", topic_id}};
}

Json query_all_topics() { return Json{{"query", "topics"}}; }

Json query_blockchain(std::string_view chain_id) {
  return Json{{"query", "blockchain"}, {"chain_id", chain_id}};
}

Json query_all_blockchains() { return Json{{"query", "blockchains"}}; }

}  // namespace api

BrokerClient::BrokerClient(std::shared_ptr<transport::Transport> transport,
                           transport::Endpoint broker, connectors::RetryPolicy policy,
                           std::string client_id)
    : transport_(std::move(transport)),
      broker_(std::move(broker)),
      policy_(policy),
      client_id_(std::move(client_id)) {}

BrokerReply BrokerClient::call(MessageKind kind, const Json& body) {
  const transport::WireMessage msg{kind, client_id_ + "-" + std::to_string(next_id_++),
                                   canonical(body)};
  const int attempts = std::max(1, policy_.attempts);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(policy_.backoff);
    ++attempts_made_;
    try {
      const auto reply = transport_->send(broker_, msg, policy_.deadline);
      auto parsed = parse_object(reply.body);
      BrokerReply out{(*parsed)["status"].get<std::string>(), std::move(*parsed)};
      return out;
    } catch (const TransportError& e) {
      const bool retryable =
          e.code() == TransportErrc::Timeout || e.code() == TransportErrc::ConnectionRefused;
      if (!retryable || attempt + 1 >= attempts) throw;
    }
  }
}

BrokerReply BrokerClient::require(MessageKind kind, const Json& body) {
  auto reply = call(kind, body);
  if (!reply.ok()) throw BrokerRejected(reply);
  return reply;
}

}  // namespace interop::broker
