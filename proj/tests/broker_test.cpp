#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "interop/broker/api.hpp"
#include "interop/broker/broker.hpp"
#include "interop/broker/config.hpp"
#include "interop/broker/service.hpp"
#include "interop/common/config_error.hpp"
#include "interop/ledger/block_log.hpp"
#include "interop/transport/sim_transport.hpp"
#include "ledger_util.hpp"
#include "temp_dir.hpp"

using namespace interop;
using namespace interop::broker;
using ledger::RejectCode;
using ledger::TxReceipt;
using ledger::TxStatus;
using transport::MessageKind;
using transport::WireMessage;

namespace {

TxReceipt receipt(TxStatus s, RejectCode code = RejectCode::None) {
  TxReceipt r;
  r.tx_id = "tx-1";
  r.status = s;
  r.code = code;
  return r;
}

struct ManualBroker {
  ManualClock clock;
  std::shared_ptr<transport::SimTransport> transport = std::make_shared<transport::SimTransport>();
  Broker broker{BrokerOptions{}, transport, clock, Broker::Drive::Manual};

  Json call(MessageKind kind, const Json& body) {
    return Json::parse(broker.handle_request({kind, "c", canonical(body)}));
  }
};

std::string write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(ReplyMapping, StatusFollowsReceipt) {
  EXPECT_EQ(reply_status(receipt(TxStatus::Committed)), "ok");
  EXPECT_EQ(reply_status(receipt(TxStatus::QueryOk)), "ok");
  EXPECT_EQ(reply_status(receipt(TxStatus::Dropped)), "overloaded");
  EXPECT_EQ(reply_status(receipt(TxStatus::Rejected, RejectCode::BadRequest)), "bad_request");
  EXPECT_EQ(reply_status(receipt(TxStatus::Rejected, RejectCode::NotFound)), "not_found");
  EXPECT_EQ(reply_status(receipt(TxStatus::Rejected, RejectCode::Conflict)), "conflict");
  EXPECT_EQ(reply_status(receipt(TxStatus::Rejected, RejectCode::Forbidden)), "forbidden");
  EXPECT_EQ(reply_status(receipt(TxStatus::Rejected, RejectCode::Internal)), "error");
}

TEST(ReplyMapping, BodyCarriesHeightReasonAndResult) {
  auto r = receipt(TxStatus::Committed);
  r.block_height = 4;
  r.payload = R"({"notified":2})";
  EXPECT_EQ(reply_for(r), R"({"block_height":4,"result":{"notified":2},"status":"ok","tx_id":"tx-1"})");
  auto rej = receipt(TxStatus::Rejected, RejectCode::Forbidden);
  rej.reason = "not topic publisher";
  EXPECT_EQ(reply_for(rej), R"({"reason":"not topic publisher","status":"forbidden","tx_id":"tx-1"})");
}

TEST(RequestMapping, RejectsUnusableBodies) {
  std::string error;
  EXPECT_FALSE(to_transaction({MessageKind::PublishReq, "c", "[1]"}, error));
  EXPECT_EQ(error, "body is not a JSON object");
  EXPECT_FALSE(to_transaction({MessageKind::Reply, "c", "{}"}, error));
  EXPECT_FALSE(to_transaction({MessageKind::QueryReq, "c", R"({"query":"topic"})"}, error));
  auto tx = to_transaction(
      {MessageKind::PublishReq, "c", canonical(api::publish("t", "m", "pub"))}, error);
  ASSERT_TRUE(tx);
  EXPECT_EQ(tx->operation, "PublishToTopic");
  EXPECT_EQ(tx->caller, "pub");
  EXPECT_EQ(tx->args, (std::vector<Bytes>{"t", "m"}));
}

TEST(Broker, EnrollCreateAndQueryOverTheWire) {
  ManualBroker b;
  const auto pub = testkit::fabric_record("pub", contracts::Role::Publisher);
  EXPECT_EQ(b.call(MessageKind::EnrollReq, api::enroll(pub))["status"], "ok");
  EXPECT_EQ(b.call(MessageKind::EnrollReq, api::enroll(pub))["status"], "conflict");
  EXPECT_EQ(b.call(MessageKind::CreateTopicReq, api::create_topic("t", "T", "pub", "m"))["status"],
            "ok");
  const auto q = b.call(MessageKind::QueryReq, api::query_topic("t"));
  EXPECT_EQ(q["status"], "ok");
  EXPECT_EQ(q["result"]["publisher"], "pub");
  EXPECT_EQ(b.call(MessageKind::QueryReq, api::query_topic("nope"))["status"], "not_found");
  EXPECT_EQ(b.call(MessageKind::QueryReq, api::query_all_blockchains())["result"].size(), 1u);
}

TEST(Broker, TxIdsResumeAfterRestore) {
  ManualBroker a;
  a.call(MessageKind::EnrollReq, api::enroll(testkit::fabric_record("x", contracts::Role::Both)));
  const auto last = a.call(MessageKind::EnrollReq,
                           api::enroll(testkit::fabric_record("y", contracts::Role::Both)));
  ManualClock clock;
  Broker b(BrokerOptions{}, a.transport, clock, Broker::Drive::Manual);
  b.restore(a.broker.ledger().blocks());
  const auto next = Json::parse(b.handle_request(
      {MessageKind::EnrollReq, "c",
       canonical(api::enroll(testkit::fabric_record("z", contracts::Role::Both)))}));
  EXPECT_EQ(last["tx_id"], "tx-2");
  EXPECT_EQ(next["tx_id"], "tx-3");
}

TEST(Broker, FuzzedRequestsAlwaysGetAStatusReply) {
  ManualBroker b;
  b.call(MessageKind::EnrollReq, api::enroll(testkit::fabric_record("p", contracts::Role::Both)));
  std::mt19937_64 rng(77);
  const std::vector<std::string> fragments = {
      "{", "}", "[", "]", "\"topic_id\"", "\"record\"", ":", ",", "\"t\"", "null", "1e999",
      "\"query\"", "\"topics\"", "\"caller\"", "\"message_b64\"", "\"\\u0000\"", "\xff", "true"};
  for (int i = 0; i < 3000; ++i) {
    std::string body;
    const int n = static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) body += fragments[rng() % fragments.size()];
    const auto kind = static_cast<MessageKind>(rng() % 8);
    std::string reply;
    ASSERT_NO_THROW(reply = b.broker.handle_request({kind, "f", body})) << body;
    ASSERT_TRUE(transport::well_formed_reply(reply)) << reply;
    if (!parse_object(body)) EXPECT_EQ(Json::parse(reply)["status"], "bad_request") << body;
  }
}

TEST(BrokerConfig, ParsesTheExample) {
  const auto c = BrokerConfig::parse(example_config());
  EXPECT_EQ(c.listen.port, 7050);
  EXPECT_EQ(c.capacity, ledger::CapacityModel{});
  ASSERT_EQ(c.sample.chains.size(), 1u);
  EXPECT_EQ(c.sample.topics[0].message, "hello");
  EXPECT_EQ(c.notifier.attempts, 3);
  EXPECT_NO_THROW(c.validate());
}

TEST(BrokerConfig, ErrorsNameTheLine) {
  auto expect_line = [](const std::string& yaml, int line) {
    try {
      BrokerConfig::parse(yaml);
      ADD_FAILURE() << "accepted: " << yaml;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
      EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line)), std::string::npos);
    }
  };
  expect_line("listen:\n  host: x\n  port: 0\n", 3);
  expect_line("listen:\n  port: 70000\n", 2);
  expect_line("data_dir: d\nbogus: 1\n", 2);
  expect_line("capacity:\n  invoke_service_rate: -1\n", 2);
  expect_line("capacity:\n  queue_capacity: lots\n", 2);
  expect_line("fsync: true\nlisten: a: b\n", 2);
  expect_line("sample:\n  chains:\n    - chain_id: a\n      name: A\n      type: fabric\n"
              "      server_ip: 10.0.0.1\n      port: 7051\n      role: admin\n", 8);
}

TEST(BrokerService, RestartPreservesTopics) {
  testkit::TempDir dir;
  auto config = BrokerConfig::parse(example_config());
  config.data_dir = dir.path() / "data";
  config.listen = {"svc", 1, "/b"};
  auto t = std::make_shared<transport::SimTransport>();
  auto enroll_and_create = [&](BrokerService& s) {
    s.broker().call([] {
      ledger::Transaction tx;
      tx.kind = ledger::TxKind::Invoke;
      tx.contract = ledger::ContractId::Topics;
      tx.operation = "CreateTopic";
      tx.args = {"news", "News", "fabric-pub", "first"};
      return tx;
    }());
  };
  ledger::WorldState before;
  {
    BrokerService s(config, t);
    s.start();
    enroll_and_create(s);
    before = s.broker().ledger().state();
    s.stop();
  }
  BrokerService again(config, t);
  again.start();
  EXPECT_EQ(again.broker().ledger().state(), before);
  const auto reply = Json::parse(
      t->send(config.listen,
              {MessageKind::QueryReq, "c", canonical(api::query_all_topics())},
              std::chrono::milliseconds(2000))
          .body);
  EXPECT_EQ(reply["result"].size(), 2u);
  again.stop();
}

TEST(BrokerService, CorruptLogFailsNamingTheHeight) {
  testkit::TempDir dir;
  auto config = BrokerConfig::parse(example_config());
  config.data_dir = dir.path();
  config.listen = {"svc", 2, ""};
  auto t = std::make_shared<transport::SimTransport>();
  {
    BrokerService s(config, t);
    s.start();
    s.stop();
  }
  const auto log = dir.path() / kBlockLogName;
  const auto loaded = ledger::BlockLog::read(log);
  ASSERT_EQ(loaded.blocks.size(), 2u);
  {
    std::fstream f(log, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(loaded.valid_bytes) - 40);
    f.put('\x5a');
  }
  BrokerService s(config, t);
  try {
    s.start();
    FAIL();
  } catch (const ledger::CorruptLog& e) {
    EXPECT_EQ(e.height(), 2u);
    EXPECT_NE(std::string(e.what()).find("height 2"), std::string::npos);
  }
}

TEST(BrokerService, InvalidConfigRefusesToStart) {
  BrokerConfig c;
  c.listen.port = 0;
  BrokerService s(c, std::make_shared<transport::SimTransport>());
  EXPECT_THROW(s.start(), ConfigError);
}

TEST(BrokerTool, InitSampleIsAValidConfig) {
  testkit::TempDir dir;
  const auto out = dir.path() / "broker.yaml";
  const auto cmd = std::string(BROKER_TOOL) + " init-sample --out " + out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_NO_THROW(BrokerConfig::load(out));
}

TEST(BrokerTool, DumpLedgerPrintsOneLinePerBlock) {
  testkit::TempDir dir;
  auto config = BrokerConfig::parse(example_config());
  config.data_dir = dir.path();
  config.listen = {"svc", 3, ""};
  {
    BrokerService s(config, std::make_shared<transport::SimTransport>());
    s.start();
  }
  const auto dump = dir.path() / "dump.jsonl";
  const auto cmd = std::string(BROKER_TOOL) + " dump-ledger --log " +
                   (dir.path() / kBlockLogName).string() + " > " + dump.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(dump);
  std::string header;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(Json::parse(header)["format"], 1);
  int blocks = 0;
  for (std::string line; std::getline(in, line);) {
    const auto j = Json::parse(line);
    EXPECT_EQ(j["height"], ++blocks);
    EXPECT_EQ(j["txs"][0]["operation"], "InitLedger");
  }
  EXPECT_EQ(blocks, 2);
}
