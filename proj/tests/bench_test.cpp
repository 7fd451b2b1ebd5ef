#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>

#include "interop/bench/config.hpp"
#include "interop/bench/emit.hpp"
#include "interop/bench/harness.hpp"
#include "interop/broker/service.hpp"
#include "interop/common/config_error.hpp"
#include "shape_checks.hpp"
#include "temp_dir.hpp"

using namespace interop;
using namespace interop::bench;

namespace {

constexpr const char* kSmall = R"(schema: 1
seed: 3
capacity:
  invoke_service_rate: 10
  queue_capacity: 12
  overload_penalty_units: 0.5
experiments:
  - name: query
    workload: {operation: QueryTopic, topics: 3}
    rates: [4, 8]
    duration_s: 2
    workers: 2
  - name: create
    workload: {operation: CreateTopic}
    rates: [5, 15, 25]
    duration_s: 2
    workers: 3
  - name: publish
    workload: {operation: PublishToTopic, topics: 2, fanout: 2, subscribers: 4}
    rounds:
      - {send_rate: 3, duration_s: 2, workers: 1}
      - {send_rate: 12, duration_s: 2, workers: 4}
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome outcome(double sent_s, double done_s, Result r) {
  return {from_seconds(sent_s), from_seconds(done_s), from_seconds(done_s - sent_s), r, 0};
}

}  // namespace

TEST(Schedule, UniformOffsetsAndRoundRobinWorkers) {
  Workload w;
  const auto setup = make_setup(w, "s", 9000);
  ArgGenerator gen(w, setup, "s");
  const auto reqs = schedule({7.0, 3.0, 4}, gen);
  ASSERT_EQ(reqs.size(), 21u);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    EXPECT_EQ(reqs[i].offset, static_cast<Nanos>(std::llround(i * 1e9 / 7.0))) << i;
    EXPECT_EQ(reqs[i].worker, static_cast<int>(i % 4));
    EXPECT_EQ(reqs[i].message.kind, transport::MessageKind::QueryReq);
  }
}

TEST(Schedule, GeneratorIsSeeded) {
  Workload w;
  w.operation = Operation::PublishToTopic;
  w.fanout = 2;
  const auto setup = make_setup(w, "p", 9000);
  ArgGenerator a(w, setup, "p"), b(w, setup, "p");
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.next().body, b.next().body);
  w.seed = 2;
  ArgGenerator c(w, setup, "p");
  ArgGenerator d(Workload{Operation::PublishToTopic, 1, 2}, setup, "p");
  bool differs = false;
  for (int i = 0; i < 20; ++i) differs |= c.next().body != d.next().body;
  EXPECT_TRUE(differs);
}

TEST(Summarize, MatchesHandComputedRow) {
  const std::vector<Outcome> o = {
      outcome(0.0, 0.5, Result::Success), outcome(0.5, 1.5, Result::Success),
      outcome(1.0, 1.1, Result::Dropped), outcome(1.5, 4.5, Result::Rejected),
      {from_seconds(2.0), 0, 0, Result::Pending, 0},
  };
  const auto row = summarize({2.5, 2.0, 1}, o);
  EXPECT_EQ(row.submitted, 5u);
  EXPECT_EQ(row.committed, 2u);
  EXPECT_EQ(row.rejected, 1u);
  EXPECT_EQ(row.dropped, 1u);
  EXPECT_EQ(row.pending, 1u);
  EXPECT_DOUBLE_EQ(row.offered_rate, 4 / 2.0);
  EXPECT_DOUBLE_EQ(row.throughput, 2 / 4.5);
  EXPECT_DOUBLE_EQ(row.latency_min_ms, 500.0);
  EXPECT_DOUBLE_EQ(row.latency_max_ms, 3000.0);
  EXPECT_DOUBLE_EQ(row.latency_avg_ms, (500.0 + 1000.0 + 3000.0) / 3);
  EXPECT_DOUBLE_EQ(row.success_rate, 50.0);
}

TEST(Summarize, ThroughputWindowIsAtLeastTheRoundDuration) {
  const auto row = summarize({4, 5.0, 1}, {outcome(0, 0.1, Result::Success)});
  EXPECT_DOUBLE_EQ(row.throughput, 1 / 5.0);
}

class SmallRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = BenchConfig::parse(kSmall);
    report_ = run(config_);
  }
  static BenchConfig config_;
  static BenchReport report_;
};
BenchConfig SmallRun::config_;
BenchReport SmallRun::report_;

TEST_F(SmallRun, Completes) {
  EXPECT_FALSE(report_.incomplete);
  ASSERT_EQ(report_.experiments.size(), 3u);
  for (const auto& e : report_.experiments) EXPECT_TRUE(e.complete) << e.error;
}

TEST_F(SmallRun, EveryRequestIsAccountedFor) {
  for (const auto& e : report_.experiments) {
    for (const auto& r : e.rounds) {
      EXPECT_EQ(r.submitted, r.committed + r.rejected + r.dropped + r.pending);
      EXPECT_EQ(r.submitted, static_cast<std::uint64_t>(std::llround(r.send_rate * r.duration_s)));
      EXPECT_EQ(r.pending, 0u);
    }
  }
}

TEST_F(SmallRun, OfferedRateTracksSendRate) {
  for (const auto& e : report_.experiments) {
    for (const auto& r : e.rounds) EXPECT_NEAR(r.offered_rate, r.send_rate, 0.02 * r.send_rate);
  }
}

TEST_F(SmallRun, SaturationDegradesMonotonically) {
  const auto* create = testkit::find_experiment(report_, "create");
  ASSERT_TRUE(create);
  const auto& r = create->rounds;
  EXPECT_NEAR(r[0].throughput, 5, 0.25);
  EXPECT_LT(r[1].latency_avg_ms, r[2].latency_avg_ms);
  EXPECT_LE(r[2].throughput, 10.0 * 1.01);
  EXPECT_GT(r[2].dropped, 0u);
}

TEST_F(SmallRun, IsDeterministic) {
  EXPECT_EQ(canonical(report_json(run(config_))), canonical(report_json(report_)));
}

TEST_F(SmallRun, EmittersAgreeOnRows) {
  testkit::TempDir dir;
  const auto paths = emit(report_, {Format::Json, Format::Csv, Format::Svg}, dir.path());
  EXPECT_EQ(paths.size(), 5u);
  const auto json = Json::parse(slurp(dir / "report.json"));
  std::size_t json_rows = 0;
  for (const auto& e : json["experiments"]) json_rows += e["rounds"].size();
  std::ifstream csv(dir / "report.csv");
  std::size_t csv_rows = 0;
  for (std::string line; std::getline(csv, line);) ++csv_rows;
  EXPECT_EQ(csv_rows, json_rows + 1);
  EXPECT_EQ(json["schema"], std::string(kReportSchema));
  EXPECT_EQ(json["metadata"]["config_digest"], config_.digest());
  for (const auto& e : report_.experiments) {
    const auto svg = slurp(dir / (e.name + ".svg"));
    const std::regex series(R"(<polyline class="series")");
    EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), series),
                            std::sregex_iterator()),
              4);
  }
}

TEST_F(SmallRun, ReportMatchesGolden) {
  const auto path = std::filesystem::path(GOLDEN_DIR) / "bench" / "small_report.json";
  const auto text = report_json(report_).dump(2) + "\n";
  if (std::getenv("UPDATE_GOLDEN")) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << text;
  }
  EXPECT_EQ(text, slurp(path)) << "regenerate with UPDATE_GOLDEN=1";
}

TEST(BenchConfig, SeedOverrideChangesDigestAndWorkloads) {
  auto a = BenchConfig::parse(kSmall);
  auto b = a;
  b.reseed(99);
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(b.experiments[0].workload.seed, 99u);
  EXPECT_EQ(b.experiments[2].workload.seed, 101u);
}

TEST(BenchConfig, ErrorsNameTheLine) {
  auto line_of = [](const std::string& yaml) {
    try {
      BenchConfig::parse(yaml);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("schema: 2\n"), 1);
  EXPECT_EQ(line_of("seed: 1\ntarget: cloud\n"), 2);
  EXPECT_EQ(line_of("url: ftp://x\n"), 1);
  EXPECT_EQ(line_of("experiments:\n  - name: q\n    workload: {operation: Fly}\n    rates: [1]\n"), 3);
  EXPECT_EQ(line_of("experiments:\n  - name: q\n    workload: {operation: QueryTopic}\n    rates: [1, -2]\n"), 4);
  EXPECT_EQ(line_of("experiments:\n  - name: q\n    workload: {operation: QueryTopic}\n"), 2);
  EXPECT_EQ(line_of("capacity:\n  max_block_size: 0\n"), 2);
}

TEST(BenchConfig, ParsesUrls) {
  const auto ep = parse_url("http://10.1.2.3:7050/broker/");
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->host, "10.1.2.3");
  EXPECT_EQ(ep->port, 7050);
  EXPECT_EQ(ep->base_path, "/broker");
  EXPECT_FALSE(parse_url("http://host"));
  EXPECT_FALSE(parse_url("http://host:0"));
  EXPECT_FALSE(parse_url("https://host:1"));
}

TEST(BenchDesk, ShapesHoldAtDeskScale) {
  const auto config = BenchConfig::load(std::string(CONFIG_DIR) + "/bench-desk.yaml");
  const auto report = run(config);
  ASSERT_FALSE(report.incomplete);
  const double c = config.capacity.invoke_service_rate;
  for (const auto& [name, v] :
       {std::pair{"query", testkit::query_shape(*testkit::find_experiment(report, "query"))},
        {"create", testkit::invoke_shape(*testkit::find_experiment(report, "create"), c)},
        {"subscribe", testkit::invoke_shape(*testkit::find_experiment(report, "subscribe"), c)},
        {"unsubscribe",
         testkit::invoke_shape(*testkit::find_experiment(report, "unsubscribe"), c)},
        {"publish", testkit::publish_shape(*testkit::find_experiment(report, "publish"), c)}}) {
    EXPECT_TRUE(v.ok) << name << ": " << v.detail;
  }
}

TEST(UrlTarget, RunsAgainstAnHttpBroker) {
  broker::BrokerConfig bc;
  testkit::TempDir dir;
  bc.data_dir = dir.path();
  bc.listen = {"127.0.0.1", 18350, ""};
  bc.capacity.invoke_service_rate = 200;
  bc.capacity.block_interval_ms = 10;
  broker::BrokerService service(bc);
  service.start();
  Experiment e;
  e.name = "url-create";
  e.workload.operation = Operation::CreateTopic;
  e.rounds = {{10, 1.0, 2}};
  UrlTarget target(bc.listen);
  const auto rep = run_experiment(e, target, from_seconds(10), 18360, 1);
  ASSERT_TRUE(rep.complete) << rep.error;
  const auto& row = rep.rounds.at(0);
  EXPECT_EQ(row.submitted, 10u);
  EXPECT_EQ(row.committed, 10u);
  EXPECT_NEAR(row.offered_rate, 10, 0.5);
  service.stop();
}

TEST(UrlTarget, UnreachableBrokerMarksTheReportIncomplete) {
  auto config = BenchConfig::parse(kSmall);
  config.target = TargetKind::Url;
  config.url = {"127.0.0.1", 18399, ""};
  const auto report = run(config);
  EXPECT_TRUE(report.incomplete);
  ASSERT_EQ(report.experiments.size(), 1u);
  EXPECT_FALSE(report.experiments[0].complete);
}
