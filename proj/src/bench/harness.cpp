#include "interop/bench/harness.hpp"

#include <algorithm>
#include <limits>

namespace interop::bench {

RoundRow summarize(const RoundSpec& spec, const std::vector<Outcome>& outcomes) {
  RoundRow row;
  row.send_rate = spec.send_rate;
  row.duration_s = spec.duration_s;
  row.workers = spec.workers;
  row.submitted = outcomes.size();

  Nanos first_send = std::numeric_limits<Nanos>::max();
  Nanos last_send = std::numeric_limits<Nanos>::min();
  Nanos last_finish = std::numeric_limits<Nanos>::min();
  Nanos lat_min = std::numeric_limits<Nanos>::max();
  Nanos lat_max = 0;
  double lat_sum = 0.0;
  std::uint64_t lat_n = 0;
  for (const auto& o : outcomes) {
    first_send = std::min(first_send, o.submitted_at);
    last_send = std::max(last_send, o.submitted_at);
    switch (o.result) {
      case Result::Success: ++row.committed; break;
      case Result::Rejected: ++row.rejected; break;
      case Result::Dropped: ++row.dropped; break;
      case Result::Pending: ++row.pending; continue;
    }
    last_finish = std::max(last_finish, o.finished_at);
    if (o.result == Result::Dropped) continue;
    lat_min = std::min(lat_min, o.latency);
    lat_max = std::max(lat_max, o.latency);
    lat_sum += static_cast<double>(o.latency);
    ++lat_n;
  }

  if (outcomes.size() > 1 && last_send > first_send) {
    row.offered_rate = static_cast<double>(outcomes.size() - 1) / to_seconds(last_send - first_send);
  } else {
    row.offered_rate = static_cast<double>(outcomes.size()) / spec.duration_s;
  }
  double span = spec.duration_s;
  if (row.submitted > row.pending) span = std::max(span, to_seconds(last_finish - first_send));
  row.throughput = static_cast<double>(row.committed) / span;
  if (lat_n > 0) {
    row.latency_min_ms = to_millis(lat_min);
    row.latency_max_ms = to_millis(lat_max);
    row.latency_avg_ms = lat_sum / static_cast<double>(lat_n) / kNanosPerMilli;
  }
  const auto settled = row.submitted - row.pending;
  row.success_rate = settled ? 100.0 * static_cast<double>(row.committed) / settled : 0.0;
  return row;
}

std::unique_ptr<Target> default_target(const BenchConfig& config, const Experiment& e) {
  if (config.target == TargetKind::Url) return std::make_unique<UrlTarget>(config.url);
  return std::make_unique<InprocTarget>(e.capacity.value_or(config.capacity));
}

ExperimentReport run_experiment(const Experiment& e, Target& target, Nanos drain_timeout,
                                std::uint16_t base_port, std::uint64_t run_seed) {
  ExperimentReport rep;
  rep.name = e.name;
  rep.operation = e.workload.operation;
  rep.fanout = e.workload.fanout;
  const auto prefix = e.name + "-" + std::to_string(run_seed);
  try {
    const auto setup = make_setup(e.workload, prefix, base_port);
    target.provision(setup);
    ArgGenerator gen(e.workload, setup, prefix);
    Nanos origin = target.now();
    for (std::size_t i = 0; i < e.rounds.size(); ++i) {
      const auto requests = schedule(e.rounds[i], gen);
      const Nanos start = target.now();
      if (i == 0) origin = start;
      auto row = summarize(e.rounds[i], target.run_round(requests, drain_timeout));
      row.index = i;
      row.start_s = to_seconds(start - origin);
      rep.rounds.push_back(row);
    }
  } catch (const std::exception& ex) {
    rep.complete = false;
    rep.error = ex.what();
  }
  return rep;
}

BenchReport run(const BenchConfig& config, const TargetFactory& factory) {
  BenchReport report;
  report.seed = config.seed;
  report.config_digest = config.digest();
  report.target = config.target == TargetKind::Inproc ? "inproc" : "url";
  const Nanos drain = from_seconds(config.drain_timeout_s);
  for (std::size_t i = 0; i < config.experiments.size(); ++i) {
    const auto& e = config.experiments[i];
    auto target = factory(config, e);
    const auto base_port = static_cast<std::uint16_t>(config.stub_base_port + 100 * i);
    report.experiments.push_back(run_experiment(e, *target, drain, base_port, config.seed));
    if (!report.experiments.back().complete) {
      report.incomplete = true;
      break;
    }
  }
  return report;
}

}  // namespace interop::bench
