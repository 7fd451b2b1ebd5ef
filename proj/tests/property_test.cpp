#include <gtest/gtest.h>

#include <set>

#include "reference_model.hpp"

using namespace interop;

TEST(ContractProperty, RandomSequencesMatchReferenceModel) {
  std::mt19937_64 lengths(99);
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto len = std::uniform_int_distribution<std::size_t>(1, 200)(lengths);
    const auto result = testkit::run_sequence(seed, len);
    ASSERT_TRUE(result.ok) << "seed " << seed << ": " << result.detail;
  }
}

TEST(ContractProperty, ReferentialIntegrityHolds) {
  for (std::uint64_t seed = 5000; seed < 5050; ++seed) {
    contracts::ContractOptions options;
    options.max_message_bytes = 48;
    ledger::CapacityModel cap;
    cap.queue_capacity = 100000;
    ledger::Ledger l(cap, contracts::make_broker_contracts(options), nullptr, false);
    testkit::ReferenceModel model(options);
    testkit::SequenceGenerator gen(seed, options.max_message_bytes);
    for (int i = 0; i < 150; ++i) l.submit(gen.next(model).tx);
    testkit::drain(l);
    const auto state = l.state();
    for (const auto& [k, v] : state.range(contracts::kTopicPrefix)) {
      const auto t = contracts::Topic::from_json(Json::parse(v));
      EXPECT_TRUE(state.find(contracts::chain_key(t.publisher))) << k;
      std::set<std::string> unique(t.subscribers.begin(), t.subscribers.end());
      EXPECT_EQ(unique.size(), t.subscribers.size());
      for (const auto& s : t.subscribers) EXPECT_TRUE(state.find(contracts::chain_key(s)));
    }
  }
}

TEST(ContractProperty, GeneratorReachesEveryRejection) {
  std::set<std::string> reasons;
  for (std::uint64_t seed = 9000; seed < 9100; ++seed) {
    contracts::ContractOptions options;
    options.max_message_bytes = 48;
    ledger::CapacityModel cap;
    cap.queue_capacity = 100000;
    ledger::Ledger l(cap, contracts::make_broker_contracts(options), nullptr, false);
    testkit::ReferenceModel model(options);
    testkit::SequenceGenerator gen(seed, options.max_message_bytes);
    for (int i = 0; i < 200; ++i) l.submit(gen.next(model).tx);
    for (const auto& r : testkit::drain(l)) {
      if (r.status == ledger::TxStatus::Rejected) reasons.insert(r.reason);
    }
  }
  for (const char* want :
       {"already enrolled", "unsupported type", "empty chain_id", "topic exists",
        "publisher not enrolled", "message too large", "topic not found",
        "subscriber not enrolled", "subscriber lacks subscriber role", "not topic publisher",
        "empty topic_id"}) {
    EXPECT_TRUE(reasons.contains(want)) << want;
  }
}
