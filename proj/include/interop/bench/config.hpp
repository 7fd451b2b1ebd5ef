#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "interop/bench/workload.hpp"
#include "interop/common/config_error.hpp"
#include "interop/common/json.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/transport/wire.hpp"

namespace interop::bench {

inline constexpr int kConfigSchema = 1;

enum class TargetKind { Inproc, Url };

struct Experiment {
  std::string name;
  Workload workload;
  std::vector<RoundSpec> rounds;
  // Replaces the run-wide capacity for this experiment (inproc target).
  std::optional<ledger::CapacityModel> capacity;
  bool explicit_seed = false;
};

struct BenchConfig {
  std::uint64_t seed = 1;
  TargetKind target = TargetKind::Inproc;
  transport::Endpoint url{"127.0.0.1", 7050, ""};
  std::uint16_t stub_base_port = 7200;
  double drain_timeout_s = 600.0;
  ledger::CapacityModel capacity;
  std::vector<Experiment> experiments;

  /// Throws ConfigError with the offending line.
  static BenchConfig parse(const std::string& yaml_text);
  static BenchConfig load(const std::filesystem::path& path);

  /// Sets the run seed; workloads without their own seed follow it.
  void reseed(std::uint64_t seed);

  Json to_json() const;
  /// Hex sha256 of the canonical to_json() form.
  std::string digest() const;
};

/// Accepts "http://host:port[/base]".
std::optional<transport::Endpoint> parse_url(std::string_view url);

}  // namespace interop::bench
