#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "interop/bench/config.hpp"
#include "interop/bench/targets.hpp"
#include "interop/bench/workload.hpp"

namespace interop::bench {

inline constexpr std::string_view kReportSchema = "interop-bench-report/1";

struct RoundRow {
  std::size_t index = 0;
  double start_s = 0.0;  // from the first round of the experiment
  double send_rate = 0.0;
  double duration_s = 0.0;
  int workers = 1;
  std::uint64_t submitted = 0;
  std::uint64_t committed = 0;
  std::uint64_t rejected = 0;
  std::uint64_t dropped = 0;
  std::uint64_t pending = 0;
  double offered_rate = 0.0;
  double throughput = 0.0;
  // Over committed and rejected requests; dropped ones are excluded.
  double latency_min_ms = 0.0;
  double latency_avg_ms = 0.0;
  double latency_max_ms = 0.0;
  // committed / (submitted - pending), in percent.
  double success_rate = 0.0;
};

/// throughput = committed / max(duration, last finish - first send).
RoundRow summarize(const RoundSpec& spec, const std::vector<Outcome>& outcomes);

struct ExperimentReport {
  std::string name;
  Operation operation = Operation::QueryTopic;
  std::size_t fanout = 0;
  std::vector<RoundRow> rounds;
  bool complete = true;
  std::string error;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string target;
  bool incomplete = false;
  std::vector<ExperimentReport> experiments;
};

using TargetFactory =
    std::function<std::unique_ptr<Target>(const BenchConfig& config, const Experiment& e)>;

/// Inproc: a fresh broker per experiment with its capacity. Url: config.url.
std::unique_ptr<Target> default_target(const BenchConfig& config, const Experiment& e);

/// Provisions and runs every round; a round is drained before the next
/// one starts. Setup or reachability failures end the experiment early
/// with `complete = false`.
ExperimentReport run_experiment(const Experiment& e, Target& target, Nanos drain_timeout,
                                std::uint16_t base_port, std::uint64_t run_seed);

/// Stops at the first incomplete experiment and marks the report.
BenchReport run(const BenchConfig& config, const TargetFactory& factory = default_target);

}  // namespace interop::bench
