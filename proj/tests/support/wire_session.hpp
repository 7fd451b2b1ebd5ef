#pragma once

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "interop/broker/api.hpp"
#include "interop/broker/broker.hpp"
#include "interop/transport/wire.hpp"
#include "ledger_util.hpp"

namespace interop::testkit {

/// A scripted broker session used as the cross-transport golden suite.
struct SessionStep {
  transport::MessageKind kind;
  std::string body;
};

inline constexpr std::uint16_t kSessionBrokerPort = 18200;
inline constexpr std::uint16_t kSessionSubscriberPort = 18201;
inline constexpr std::uint16_t kSessionBesuPort = 18202;

inline contracts::BlockchainRecord session_fabric_sub() {
  auto r = fabric_record("fab-sub", contracts::Role::Subscriber, kSessionSubscriberPort);
  r.server_ip = "127.0.0.1";
  return r;
}

inline contracts::BlockchainRecord session_besu_sub() {
  auto r = besu_record("besu-sub", contracts::Role::Subscriber, kSessionBesuPort);
  r.server_ip = "127.0.0.1";
  return r;
}

inline std::vector<SessionStep> session_steps() {
  using transport::MessageKind;
  namespace api = broker::api;
  auto pub = fabric_record("fab-pub", contracts::Role::Publisher, 18203);
  pub.server_ip = "127.0.0.1";
  auto typeless = session_fabric_sub();
  typeless.chain_id = "odd";
  typeless.chain_type = "cosmos";
  auto step = [](MessageKind k, const Json& body) { return SessionStep{k, canonical(body)}; };
  return {
      step(MessageKind::EnrollReq, api::enroll(pub)),
      step(MessageKind::EnrollReq, api::enroll(session_fabric_sub())),
      step(MessageKind::EnrollReq, api::enroll(session_besu_sub())),
      step(MessageKind::EnrollReq, api::enroll(pub)),
      step(MessageKind::EnrollReq, api::enroll(typeless)),
      step(MessageKind::EnrollReq, Json{{"record", "not an object"}}),
      step(MessageKind::CreateTopicReq, api::create_topic("weather", "Weather", "fab-pub", "init")),
      step(MessageKind::CreateTopicReq, api::create_topic("weather", "Again", "fab-pub", "x")),
      step(MessageKind::CreateTopicReq, api::create_topic("other", "Other", "ghost", "x")),
      step(MessageKind::SubscribeReq, api::subscribe("weather", "fab-sub")),
      step(MessageKind::SubscribeReq, api::subscribe("weather", "besu-sub")),
      step(MessageKind::SubscribeReq, api::subscribe("weather", "fab-sub")),
      step(MessageKind::SubscribeReq, api::subscribe("absent", "fab-sub")),
      step(MessageKind::SubscribeReq, api::subscribe("weather", "fab-pub")),
      step(MessageKind::QueryReq, api::query_topic("weather")),
      step(MessageKind::QueryReq, api::query_topic("absent")),
      step(MessageKind::QueryReq, api::query_all_topics()),
      step(MessageKind::QueryReq, api::query_blockchain("besu-sub")),
      step(MessageKind::QueryReq, api::query_all_blockchains()),
      step(MessageKind::QueryReq, Json{{"query", "everything"}}),
      step(MessageKind::PublishReq, api::publish("weather", "sunny", "fab-pub")),
      step(MessageKind::PublishReq, api::publish("weather", "stolen", "fab-sub")),
      step(MessageKind::PublishReq, api::publish("absent", "x", "fab-pub")),
      step(MessageKind::UnsubscribeReq, api::unsubscribe("weather", "fab-sub")),
      step(MessageKind::PublishReq, api::publish("weather", "rain", "fab-pub")),
      step(MessageKind::QueryReq, api::query_topic("weather")),
      step(MessageKind::UpdateNotify, Json{{"fcn", "ReceiveUpdate"}}),
      step(MessageKind::Reply, Json{{"status", "ok"}}),
      SessionStep{MessageKind::PublishReq, "{not json"},
      step(MessageKind::PublishReq, Json{{"topic_id", "weather"}, {"caller", "fab-pub"}}),
  };
}

inline std::string session_golden_path(const std::string& dir) {
  return dir + "/wire/broker_session.jsonl";
}

/// Golden lines: {"kind", "request", "reply"} per step.
inline std::vector<std::string> session_lines(const std::vector<std::string>& replies) {
  const auto steps = session_steps();
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    lines.push_back(canonical(Json{{"kind", transport::to_string(steps[i].kind)},
                                   {"request", steps[i].body},
                                   {"reply", i < replies.size() ? replies[i] : ""}}));
  }
  return lines;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

/// Runs the session against a manual-drive broker served on `transport`.
/// Subscriber stubs ack every update.
inline std::vector<std::string> run_session(std::shared_ptr<transport::Transport> transport) {
  ManualClock clock;
  broker::BrokerOptions options;
  options.parallel_delivery = false;
  broker::Broker b(options, transport, clock, broker::Broker::Drive::Manual);
  const transport::Endpoint at{"127.0.0.1", kSessionBrokerPort, "/broker"};
  transport->serve(at, [&](const transport::WireMessage& m) { return b.handle_request(m); });
  connectors::FabricAdapter fabric;
  connectors::BesuAdapter besu;
  const auto ack = [](const transport::WireMessage&) {
    return transport::reply_body(transport::status::kOk);
  };
  transport->serve(fabric.endpoint(session_fabric_sub()), ack);
  transport->serve(besu.endpoint(session_besu_sub()), ack);

  std::vector<std::string> replies;
  int n = 0;
  for (const auto& s : session_steps()) {
    const auto reply =
        transport->send(at, {s.kind, "session-" + std::to_string(++n), s.body},
                        std::chrono::milliseconds(5000));
    replies.push_back(reply.body);
  }
  transport->unserve(fabric.endpoint(session_fabric_sub()));
  transport->unserve(besu.endpoint(session_besu_sub()));
  transport->unserve(at);
  return replies;
}

}  // namespace interop::testkit
