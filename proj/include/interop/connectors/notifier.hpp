#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "interop/contracts/records.hpp"
#include "interop/contracts/topics_contract.hpp"
#include "interop/ledger/types.hpp"
#include "interop/transport/wire.hpp"

namespace interop::connectors {

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff{50};
  std::chrono::milliseconds deadline = transport::kDefaultDeadline;
};

/// Builds the flavour-specific update request for one subscriber record.
class NotifierAdapter {
 public:
  virtual ~NotifierAdapter() = default;
  virtual transport::Endpoint endpoint(const contracts::BlockchainRecord& record) const = 0;
  virtual std::string build_update(const contracts::BlockchainRecord& record,
                                   std::string_view topic_id, const Bytes& message) const = 0;
};

/// Invoke-style call to a Fabric-like connector chaincode.
class FabricAdapter final : public NotifierAdapter {
 public:
  transport::Endpoint endpoint(const contracts::BlockchainRecord& record) const override;
  std::string build_update(const contracts::BlockchainRecord& record, std::string_view topic_id,
                           const Bytes& message) const override;
};

/// Transaction-style call to a Besu-like connector contract, addressed and
/// signed with the record's `address`, `abi` and `private_key` extras.
class BesuAdapter final : public NotifierAdapter {
 public:
  transport::Endpoint endpoint(const contracts::BlockchainRecord& record) const override;
  std::string build_update(const contracts::BlockchainRecord& record, std::string_view topic_id,
                           const Bytes& message) const override;
};

std::string fabric_base_path(const contracts::BlockchainRecord& record);
std::string besu_base_path(const contracts::BlockchainRecord& record);

/// Signature over a Besu-like request: hex sha256(private_key || body).
std::string besu_signature(std::string_view private_key, std::string_view unsigned_body);

/// Broker-side dispatch of publish notifications, keyed by chain type tag.
class Notifier {
 public:
  Notifier(std::shared_ptr<transport::Transport> transport, RetryPolicy policy);

  /// Registry with the fabric and besu adapters.
  static Notifier with_default_adapters(std::shared_ptr<transport::Transport> transport,
                                        RetryPolicy policy = {});

  void register_adapter(std::string tag, std::shared_ptr<const NotifierAdapter> adapter);

  ledger::DeliveryStatus dispatch(const contracts::BlockchainRecord& record,
                                  std::string_view topic_id, const Bytes& message);

  /// One delivery per subscriber, in subscription order. Distinct
  /// subscribers are contacted concurrently when `parallel` is set.
  std::vector<ledger::Delivery> deliver(const contracts::NotifyEvent& event, bool parallel);

  const RetryPolicy& policy() const { return policy_; }

 private:
  std::shared_ptr<transport::Transport> transport_;
  RetryPolicy policy_;
  std::map<std::string, std::shared_ptr<const NotifierAdapter>, std::less<>> adapters_;
  std::shared_ptr<std::atomic<std::uint64_t>> next_id_;
};

}  // namespace interop::connectors
