#pragma once

#include <filesystem>
#include <string>

#include "interop/common/config_error.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/contracts/records.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/transport/wire.hpp"

namespace interop::broker {

struct BrokerConfig {
  transport::Endpoint listen{"127.0.0.1", 7050, ""};
  std::filesystem::path data_dir = "broker-data";
  bool fsync = false;
  ledger::CapacityModel capacity;
  contracts::ContractOptions contracts;
  connectors::RetryPolicy notifier;
  bool parallel_delivery = true;
  // Written by InitLedger when the ledger starts empty.
  contracts::SampleSet sample;

  /// Throws ConfigError with the offending line.
  static BrokerConfig parse(const std::string& yaml_text);
  static BrokerConfig load(const std::filesystem::path& path);

  /// Checks a programmatically built config; throws ConfigError.
  void validate() const;
};

/// Commented example configuration, as written by `broker init-sample`.
std::string example_config();

}  // namespace interop::broker
