#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "interop/broker/api.hpp"
#include "interop/common/clock.hpp"
#include "interop/connectors/notifier.hpp"
#include "interop/contracts/records.hpp"
#include "interop/ledger/capacity_model.hpp"
#include "interop/ledger/driver.hpp"
#include "interop/ledger/ledger.hpp"
#include "interop/transport/sim_transport.hpp"
#include "interop/transport/wire.hpp"

namespace interop::connectors {

/// Stand-ins for the two remote ledger technologies. They differ in local
/// block timing, endpoint path shape, request encoding and required extras.
enum class Flavor { FabricLike, BesuLike };

std::string_view to_string(Flavor flavor);
std::string_view chain_type_tag(Flavor flavor);
ledger::CapacityModel default_capacity(Flavor flavor);

struct SimChainConfig {
  std::string chain_id;
  std::string name;
  Flavor flavor = Flavor::FabricLike;
  contracts::Role role = contracts::Role::Subscriber;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  transport::Endpoint broker;
  RetryPolicy broker_retry{3, std::chrono::milliseconds(50), std::chrono::milliseconds(5000)};
  // Only honoured when the transport is a SimTransport.
  transport::FaultSpec faults;
  std::optional<ledger::CapacityModel> capacity;
  // Merged over the flavour defaults (channel/chaincode or address/abi/private_key).
  std::map<std::string, std::string> extra;
  std::chrono::milliseconds local_commit_timeout{3000};
};

struct Subscription {
  Bytes latest_message;
  std::uint64_t last_updated = 0;  // local block height of the last update
  std::uint64_t updates = 0;
};

struct AppEvent {
  std::string topic_id;
  Bytes message;
  std::uint64_t block_height = 0;
};

/// Raised before any transport call when the local connector refuses.
class LocalRejection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulated remote network: a local ledger running the connector
/// contract, an endpoint the broker notifies, and a client for the broker.
class SimChain {
 public:
  SimChain(SimChainConfig config, std::shared_ptr<transport::Transport> transport,
           const Clock& clock);
  ~SimChain();

  SimChain(const SimChain&) = delete;
  SimChain& operator=(const SimChain&) = delete;

  void start();
  void stop();

  const SimChainConfig& config() const { return config_; }
  contracts::BlockchainRecord record() const;
  transport::Endpoint endpoint() const;

  /// Registers this chain's record with the broker's connector contract.
  void enroll();

  // Subscriber side.
  void local_subscribe(const std::string& topic_id);
  void local_unsubscribe(const std::string& topic_id);
  std::optional<Subscription> subscription(const std::string& topic_id) const;
  std::map<std::string, Subscription> subscriptions() const;
  std::vector<AppEvent> events() const;

  // Publisher side.
  void create_topic(const std::string& topic_id, const std::string& name, const Bytes& initial);
  void publish(const std::string& topic_id, const Bytes& message);
  std::set<std::string> owned_topics() const;
  std::vector<Json> broker_receipts() const;

  std::uint64_t local_height() const { return ledger_.height(); }
  broker::BrokerClient& broker_client() { return client_; }

 private:
  std::string handle_update(const transport::WireMessage& request);
  ledger::TxReceipt local_invoke(std::string op, std::vector<Bytes> args);
  void on_receipts(std::vector<ledger::TxReceipt> receipts);
  Json reply_summary(const broker::BrokerReply& reply) const;

  SimChainConfig config_;
  std::shared_ptr<transport::Transport> transport_;
  const Clock& clock_;
  ledger::Ledger ledger_;
  ledger::LedgerDriver driver_;
  broker::BrokerClient client_;

  mutable std::mutex mu_;
  std::uint64_t next_tx_ = 0;
  std::map<std::string, std::promise<ledger::TxReceipt>> waiting_;
  std::map<std::string, Subscription> subscriptions_;
  std::vector<AppEvent> events_;
  std::set<std::string> owned_;
  std::vector<Json> receipts_;
  bool serving_ = false;
};

}  // namespace interop::connectors
