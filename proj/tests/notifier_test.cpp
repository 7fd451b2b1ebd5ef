#include <gtest/gtest.h>

#include <atomic>
#include <thread>
#include <mutex>

#include "interop/common/digest.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/transport/sim_transport.hpp"
#include "ledger_util.hpp"

using namespace interop;
using namespace interop::connectors;
using namespace interop::transport;
using namespace std::chrono_literals;
using contracts::Role;
using interop::testkit::besu_record;
using interop::testkit::fabric_record;

namespace {

RetryPolicy fast(int attempts = 3) { return {attempts, 1ms, 50ms}; }

Handler ack(std::atomic<int>& calls) {
  return [&calls](const WireMessage&) {
    ++calls;
    return reply_body(status::kOk);
  };
}

}  // namespace

TEST(Adapters, FabricUpdateIsAnInvokeOnTheChannel) {
  FabricAdapter a;
  const auto r = fabric_record("f1", Role::Subscriber, 7051);
  EXPECT_EQ(a.endpoint(r).key(), "10.0.0.5:7051/fabric/interop/connector");
  EXPECT_EQ(a.build_update(r, "t", "hi"),
            R"({"args":["t","aGk="],"chaincode":"connector","channel":"interop","fcn":"ReceiveUpdate"})");
}

TEST(Adapters, BesuUpdateIsSignedWithTheRecordKey) {
  BesuAdapter a;
  const auto r = besu_record("b1", Role::Subscriber, 8545);
  EXPECT_EQ(a.endpoint(r).base_path, "/besu/0x" + std::string(40, 'a'));
  auto body = Json::parse(a.build_update(r, "t", "hi"));
  EXPECT_EQ(body["method"], "receiveUpdate");
  EXPECT_EQ(body["params"]["topicId"], "t");
  EXPECT_EQ(body["params"]["message_b64"], "aGk=");
  const auto sig = body["signature"].get<std::string>();
  body.erase("signature");
  EXPECT_EQ(sig, besu_signature(std::string(64, '1'), canonical(body)));
  // Independent oracle: hex sha256 over key then unsigned body.
  EXPECT_EQ(sig, to_hex(sha256(std::string(64, '1') + canonical(body))));
}

TEST(Notifier, DeliversToEachSubscriberInOrder) {
  auto t = std::make_shared<SimTransport>();
  std::mutex mu;
  std::vector<std::string> hits;
  auto record_hit = [&](std::string who) {
    return [&, who](const WireMessage&) {
      std::lock_guard lock(mu);
      hits.push_back(who);
      return reply_body(status::kOk);
    };
  };
  auto f = fabric_record("f", Role::Subscriber, 1);
  auto b = besu_record("b", Role::Subscriber, 2);
  t->serve(FabricAdapter().endpoint(f), record_hit("f"));
  t->serve(BesuAdapter().endpoint(b), record_hit("b"));
  auto n = Notifier::with_default_adapters(t, fast());
  contracts::NotifyEvent ev{"topic", "m", {"f", "b"}, {f, b}};
  const auto d = n.deliver(ev, false);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].chain_id, "f");
  EXPECT_EQ(d[1].chain_id, "b");
  EXPECT_TRUE(d[0].status.ok() && d[1].status.ok());
  EXPECT_EQ(hits, (std::vector<std::string>{"f", "b"}));
}

TEST(Notifier, RetriesAfterADrop) {
  auto t = std::make_shared<SimTransport>();
  auto f = fabric_record("f", Role::Subscriber, 3);
  std::atomic<int> calls{0};
  const auto ep = FabricAdapter().endpoint(f);
  t->serve(ep, ack(calls), FaultSpec{0us, 0us, 1.0});
  std::thread heal([&] {
    std::this_thread::sleep_for(20ms);
    t->set_faults(ep, {});
  });
  auto n = Notifier::with_default_adapters(t, RetryPolicy{5, 1ms, 40ms});
  EXPECT_TRUE(n.dispatch(f, "topic", "m").ok());
  heal.join();
  EXPECT_EQ(calls.load(), 1);
  EXPECT_GE(t->traffic(), 2u);
}

TEST(Notifier, PersistentTimeoutFailsAfterAllAttempts) {
  auto t = std::make_shared<SimTransport>();
  auto f = fabric_record("f", Role::Subscriber, 4);
  std::atomic<int> calls{0};
  t->serve(FabricAdapter().endpoint(f), ack(calls), FaultSpec{0us, 0us, 1.0});
  auto n = Notifier::with_default_adapters(t, fast(3));
  EXPECT_EQ(n.dispatch(f, "topic", "m"), ledger::DeliveryStatus::failed("timeout"));
  EXPECT_EQ(t->traffic(), 3u);
}

TEST(Notifier, ClosedEndpointIsConnectionRefused) {
  auto t = std::make_shared<SimTransport>();
  auto n = Notifier::with_default_adapters(t, fast(2));
  EXPECT_EQ(n.dispatch(fabric_record("f", Role::Subscriber, 5), "topic", "m"),
            ledger::DeliveryStatus::failed("connection_refused"));
}

TEST(Notifier, UnsupportedTypeMakesNoCall) {
  auto t = std::make_shared<SimTransport>();
  auto r = fabric_record("x", Role::Subscriber, 6);
  r.chain_type = "cosmos";
  std::atomic<int> calls{0};
  t->serve(FabricAdapter().endpoint(r), ack(calls));
  auto n = Notifier::with_default_adapters(t, fast());
  EXPECT_EQ(n.dispatch(r, "topic", "m"), ledger::DeliveryStatus::failed("unsupported"));
  EXPECT_EQ(t->traffic(), 0u);
}

TEST(Notifier, MissingRecordIsNotEnrolled) {
  auto t = std::make_shared<SimTransport>();
  auto n = Notifier::with_default_adapters(t, fast());
  contracts::NotifyEvent ev{"topic", "m", {"ghost"}, {std::nullopt}};
  const auto d = n.deliver(ev, true);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].status, ledger::DeliveryStatus::failed("not enrolled"));
}

TEST(Notifier, NonOkReplyStatusIsTheFailureReason) {
  auto t = std::make_shared<SimTransport>();
  auto f = fabric_record("f", Role::Subscriber, 7);
  t->serve(FabricAdapter().endpoint(f),
           [](const WireMessage&) { return reply_body(status::kUnknownTopic); });
  auto n = Notifier::with_default_adapters(t, fast());
  EXPECT_EQ(n.dispatch(f, "topic", "m"), ledger::DeliveryStatus::failed("unknown_topic"));
  EXPECT_EQ(t->traffic(), 1u);
}

TEST(Notifier, OneSlowSubscriberDoesNotBlockTheOthers) {
  auto t = std::make_shared<SimTransport>();
  auto s1 = fabric_record("s1", Role::Subscriber, 8);
  auto s2 = besu_record("s2", Role::Subscriber, 9);
  std::atomic<int> calls{0};
  t->serve(FabricAdapter().endpoint(s1), ack(calls), FaultSpec{0us, 0us, 1.0});
  t->serve(BesuAdapter().endpoint(s2), ack(calls));
  auto n = Notifier::with_default_adapters(t, fast(2));
  contracts::NotifyEvent ev{"topic", "m", {"s1", "s2"}, {s1, s2}};
  const auto d = n.deliver(ev, true);
  EXPECT_EQ(d[0].chain_id, "s1");
  EXPECT_EQ(d[0].status, ledger::DeliveryStatus::failed("timeout"));
  EXPECT_EQ(d[1].chain_id, "s2");
  EXPECT_TRUE(d[1].status.ok());
}

TEST(Notifier, ParallelDeliveryPreservesSubscriptionOrder) {
  auto t = std::make_shared<SimTransport>();
  std::atomic<int> calls{0};
  contracts::NotifyEvent ev{"topic", "m", {}, {}};
  for (int i = 0; i < 12; ++i) {
    auto r = fabric_record("s" + std::to_string(i), Role::Subscriber,
                           static_cast<std::uint16_t>(100 + i));
    t->serve(FabricAdapter().endpoint(r), ack(calls),
             FaultSpec{std::chrono::microseconds((12 - i) * 500), 0us, 0.0});
    ev.subscribers.push_back(r.chain_id);
    ev.records.push_back(r);
  }
  auto n = Notifier::with_default_adapters(t, fast());
  const auto d = n.deliver(ev, true);
  ASSERT_EQ(d.size(), 12u);
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(d[i].chain_id, "s" + std::to_string(i));
    EXPECT_TRUE(d[i].status.ok());
  }
  EXPECT_EQ(calls.load(), 12);
}
