#include <gtest/gtest.h>

#include "scenarios.hpp"

using namespace interop;
using namespace interop::testkit;
using connectors::Flavor;
using connectors::LocalRejection;
using contracts::Role;
using transport::MessageKind;

TEST(RemoteFlow, NineStepFlowConverges) {
  const auto v = nine_step_flow();
  EXPECT_TRUE(v.ok) << v.detail;
}

class FanOut : public ::testing::TestWithParam<int> {};

TEST_P(FanOut, DeliversOncePerSubscriberInOrder) {
  const auto v = algorithm_one(GetParam());
  EXPECT_TRUE(v.ok) << v.detail;
}

INSTANTIATE_TEST_SUITE_P(Subscribers, FanOut, ::testing::Values(0, 1, 5, 25));

TEST(RemoteSubscriber, ReceiveUpdateOnUnknownTopicIsRejected) {
  Network net;
  auto& sub = net.chain("s", Flavor::FabricLike, Role::Subscriber);
  connectors::FabricAdapter a;
  const auto reply = net.transport().send(
      sub.endpoint(),
      {MessageKind::UpdateNotify, "c1", a.build_update(sub.record(), "never", "x")},
      std::chrono::milliseconds(2000));
  EXPECT_EQ(Json::parse(reply.body)["status"], "unknown_topic");
  EXPECT_TRUE(sub.events().empty());
}

TEST(RemoteSubscriber, BesuRejectsABadSignature) {
  Network net;
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  auto& sub = net.chain("b", Flavor::BesuLike, Role::Subscriber);
  pub.create_topic("t", "T", "m");
  sub.local_subscribe("t");
  auto body = Json::parse(connectors::BesuAdapter().build_update(sub.record(), "t", "forged"));
  body["signature"] = std::string(64, '0');
  const auto reply = net.transport().send(sub.endpoint(),
                                          {MessageKind::UpdateNotify, "c", canonical(body)},
                                          std::chrono::milliseconds(2000));
  EXPECT_EQ(Json::parse(reply.body)["status"], "forbidden");
  EXPECT_EQ(sub.subscription("t")->updates, 0u);
}

TEST(RemoteSubscriber, IdenticalUpdateIsIdempotent) {
  Network net;
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  auto& sub = net.chain("s", Flavor::FabricLike, Role::Subscriber);
  pub.create_topic("t", "T", "m");
  sub.local_subscribe("t");
  pub.publish("t", "same");
  const auto height = sub.local_height();
  const auto update = connectors::FabricAdapter().build_update(sub.record(), "t", "same");
  const auto reply = net.transport().send(sub.endpoint(), {MessageKind::UpdateNotify, "c", update},
                                          std::chrono::milliseconds(2000));
  EXPECT_EQ(Json::parse(reply.body)["status"], "ok");
  EXPECT_EQ(sub.subscription("t")->updates, 1u);
  EXPECT_EQ(sub.events().size(), 1u);
  EXPECT_GE(sub.local_height(), height);
}

TEST(RemoteSubscriber, SubscribeWithoutEnrollmentRollsBack) {
  Network net;
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  auto& sub = net.chain("s", Flavor::FabricLike, Role::Subscriber, false);
  pub.create_topic("t", "T", "m");
  try {
    sub.local_subscribe("t");
    FAIL();
  } catch (const broker::BrokerRejected& e) {
    EXPECT_EQ(e.status(), "not_found");
  }
  EXPECT_FALSE(sub.subscription("t"));
  EXPECT_EQ(broker_topic(net, "t")["subscribers"], Json::array());
}

TEST(RemoteSubscriber, UnsubscribeStopsUpdates) {
  Network net;
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  auto& stay = net.chain("stay", Flavor::BesuLike, Role::Subscriber);
  auto& leave = net.chain("leave", Flavor::FabricLike, Role::Subscriber);
  pub.create_topic("t", "T", "m");
  stay.local_subscribe("t");
  leave.local_subscribe("t");
  pub.publish("t", "one");
  leave.local_unsubscribe("t");
  pub.publish("t", "two");
  EXPECT_FALSE(leave.subscription("t"));
  ASSERT_EQ(leave.events().size(), 1u);
  EXPECT_EQ(leave.events()[0].message, "one");
  EXPECT_EQ(stay.subscription("t")->latest_message, "two");
  EXPECT_EQ(pub.broker_receipts().back()["deliveries"].size(), 1u);
}

TEST(RemotePublisher, UnownedTopicIsRefusedLocally) {
  auto t = std::make_shared<transport::SimTransport>();
  Network net(t);
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  const auto traffic = t->traffic();
  const auto height = pub.local_height();
  EXPECT_THROW(pub.publish("not-mine", "x"), LocalRejection);
  EXPECT_EQ(t->traffic(), traffic);
  EXPECT_EQ(pub.local_height(), height);
}

TEST(RemotePublisher, SubscriberCannotCreateTopics) {
  auto t = std::make_shared<transport::SimTransport>();
  Network net(t);
  auto& sub = net.chain("s", Flavor::FabricLike, Role::Subscriber);
  const auto traffic = t->traffic();
  EXPECT_THROW(sub.create_topic("t", "T", "m"), LocalRejection);
  EXPECT_EQ(t->traffic(), traffic);
}

TEST(RemotePublisher, LastPublishWins) {
  Network net;
  auto& pub = net.chain("p", Flavor::BesuLike, Role::Publisher);
  auto& sub = net.chain("s", Flavor::FabricLike, Role::Subscriber);
  pub.create_topic("t", "T", "m0");
  sub.local_subscribe("t");
  pub.publish("t", "m1");
  pub.publish("t", "m2");
  EXPECT_EQ(topic_message(net, "t"), "m2");
  EXPECT_EQ(sub.subscription("t")->latest_message, "m2");
  EXPECT_EQ(sub.subscription("t")->updates, 2u);
  EXPECT_EQ(pub.broker_receipts().size(), 3u);
}

TEST(RemotePublisher, BrokerDownSurfacesAfterRetries) {
  auto t = std::make_shared<transport::SimTransport>();
  Network net(t);
  auto& pub = net.chain("p", Flavor::FabricLike, Role::Publisher);
  pub.create_topic("t", "T", "m0");
  net.down();
  const int before = pub.broker_client().attempts_made();
  try {
    pub.publish("t", "m1");
    FAIL();
  } catch (const transport::TransportError& e) {
    EXPECT_EQ(e.code(), transport::TransportErrc::ConnectionRefused);
  }
  EXPECT_EQ(pub.broker_client().attempts_made() - before, 3);
}
