#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace interop::ledger {

/// Throughput/latency model of the invoke and query pipelines.
///
/// The invoke pipeline is a single FIFO server that drains
/// `invoke_service_rate` service units per second. A transaction costs one
/// unit, except fan-out transactions (publish) which cost
/// `publish_base_cost + publish_per_subscriber_cost * subscribers`. Admission
/// is bounded by `queue_capacity` not-yet-terminal invokes; each refused
/// admission charges `overload_penalty_units` to the server.
struct CapacityModel {
  double invoke_service_rate = 16.0;
  double query_service_rate = 400.0;
  double publish_base_cost = 1.5;
  double publish_per_subscriber_cost = 0.25;
  double overload_penalty_units = 0.0;
  std::size_t queue_capacity = 1000;
  std::int64_t block_interval_ms = 100;
  std::size_t max_block_size = 10;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double invoke_cost(std::optional<std::size_t> fanout) const {
    if (!fanout) return 1.0;
    return publish_base_cost + publish_per_subscriber_cost * static_cast<double>(*fanout);
  }

  bool operator==(const CapacityModel&) const = default;
};

}  // namespace interop::ledger
