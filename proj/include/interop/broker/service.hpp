#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "interop/broker/broker.hpp"
#include "interop/broker/config.hpp"
#include "interop/common/clock.hpp"
#include "interop/ledger/block_log.hpp"
#include "interop/transport/wire.hpp"

namespace interop::broker {

inline constexpr std::string_view kBlockLogName = "blocks.log";

/// The runnable broker: recovers the ledger from `data_dir`, seeds an empty
/// ledger from the sample set, and serves the wire API on `listen`.
///
/// start() throws ConfigError, CorruptLog / RecoveryError (naming the
/// height), or TransportError when the endpoint cannot be bound.
class BrokerService {
 public:
  /// The transport serves the API and carries notifications. HTTP when null.
  explicit BrokerService(BrokerConfig config,
                         std::shared_ptr<transport::Transport> transport = nullptr,
                         const Clock* clock = nullptr);
  ~BrokerService();

  BrokerService(const BrokerService&) = delete;
  BrokerService& operator=(const BrokerService&) = delete;

  void start();
  void stop();
  bool running() const { return running_; }

  Broker& broker() { return *broker_; }
  const BrokerConfig& config() const { return config_; }
  std::filesystem::path log_path() const { return config_.data_dir / kBlockLogName; }
  transport::Transport& transport() { return *transport_; }

 private:
  BrokerConfig config_;
  std::shared_ptr<transport::Transport> transport_;
  SteadyClock steady_;
  const Clock& clock_;
  std::optional<ledger::BlockLog> log_;
  std::unique_ptr<Broker> broker_;
  bool running_ = false;
};

}  // namespace interop::broker
