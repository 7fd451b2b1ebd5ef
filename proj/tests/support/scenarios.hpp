#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "interop/broker/api.hpp"
#include "network.hpp"

namespace interop::testkit {

struct Verdict {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

inline Json broker_topic(Network& net, const std::string& topic_id) {
  broker::BrokerClient client(std::shared_ptr<transport::Transport>(&net.transport(), [](auto*) {}),
                              net.broker_endpoint(), {}, "observer");
  return client.require(transport::MessageKind::QueryReq, broker::api::query_topic(topic_id))
      .body["result"];
}

inline Bytes topic_message(Network& net, const std::string& topic_id) {
  return base64_decode(broker_topic(net, topic_id)["message_b64"].get<std::string>()).value();
}

/// Enrol, create, subscribe two heterogeneous chains, publish, and check
/// every subscriber ends on the topic's current message.
inline Verdict nine_step_flow() {
  using connectors::Flavor;
  using contracts::Role;
  Verdict v;
  Network net;
  auto& pub = net.chain("pub", Flavor::FabricLike, Role::Publisher);
  auto& fab = net.chain("sub-fabric", Flavor::FabricLike, Role::Subscriber);
  auto& besu = net.chain("sub-besu", Flavor::BesuLike, Role::Subscriber);
  pub.create_topic("shipments", "Shipments", "created");
  fab.local_subscribe("shipments");
  besu.local_subscribe("shipments");
  pub.publish("shipments", "container 42 departed");

  const auto topic = broker_topic(net, "shipments");
  v.check(topic["subscribers"] == Json::array({"sub-fabric", "sub-besu"}),
          "broker subscribers: " + topic["subscribers"].dump());
  const auto message = topic_message(net, "shipments");
  v.check(message == "container 42 departed", "topic message: " + message);
  for (auto* sub : {&fab, &besu}) {
    const auto s = sub->subscription("shipments");
    v.check(s && s->latest_message == message,
            sub->config().chain_id + " holds " + (s ? s->latest_message : "nothing"));
    v.check(sub->events().size() == 1, sub->config().chain_id + " event count");
  }
  const auto receipts = pub.broker_receipts();
  v.check(receipts.size() == 2 && receipts.back()["deliveries"].size() == 2,
          "publisher receipts");
  v.check(pub.owned_topics() == std::set<std::string>{"shipments"}, "owned topics");
  return v;
}

/// Publish to an absent topic, then fan out to `S` mixed subscribers.
inline Verdict algorithm_one(int subscribers) {
  using connectors::Flavor;
  using contracts::Role;
  Verdict v;
  Network net;
  auto& pub = net.chain("pub", Flavor::FabricLike, Role::Publisher);

  const auto before = net.broker().ledger().state().entries();
  broker::BrokerClient client(std::shared_ptr<transport::Transport>(&net.transport(), [](auto*) {}),
                              net.broker_endpoint(), {}, "pub");
  const auto absent = client.call(transport::MessageKind::PublishReq,
                                  broker::api::publish("absent", "x", "pub"));
  v.check(absent.status == transport::status::kNotFound, "absent topic status " + absent.status);
  v.check(!absent.body.contains("deliveries"), "absent topic produced deliveries");
  v.check(net.broker().ledger().state().entries() == before, "absent topic changed broker state");

  pub.create_topic("t", "T", "m0");
  std::vector<connectors::SimChain*> subs;
  std::vector<std::string> order;
  for (int i = 0; i < subscribers; ++i) {
    const auto flavor = i % 2 == 0 ? Flavor::FabricLike : Flavor::BesuLike;
    auto& s = net.chain("s" + std::to_string(i), flavor, Role::Subscriber);
    s.local_subscribe("t");
    subs.push_back(&s);
    order.push_back(s.config().chain_id);
  }
  pub.publish("t", "m1");
  const auto reply = pub.broker_receipts().back();
  const auto& deliveries = reply.contains("deliveries") ? reply["deliveries"] : Json::array();
  v.check(static_cast<int>(deliveries.size()) == subscribers,
          "expected " + std::to_string(subscribers) + " deliveries, got " + deliveries.dump());
  for (std::size_t i = 0; i < deliveries.size() && i < order.size(); ++i) {
    v.check(deliveries[i]["chain_id"] == order[i], "delivery order at " + std::to_string(i));
    v.check(deliveries[i]["status"] == "delivered", "delivery to " + order[i]);
  }
  for (auto* s : subs) {
    const auto sub = s->subscription("t");
    v.check(sub && sub->latest_message == "m1" && sub->updates == 1,
            s->config().chain_id + " did not converge");
  }
  v.check(topic_message(net, "t") == "m1", "topic message");
  return v;
}

}  // namespace interop::testkit
