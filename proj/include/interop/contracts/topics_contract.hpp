#pragma once

#include "interop/contracts/records.hpp"
#include "interop/ledger/context.hpp"

namespace interop::contracts {

inline constexpr std::string_view kNotifyEvent = "notify";

/// Topic registry with publish-and-notify.
///
/// Operations: InitLedger(samples_json), CreateTopic(id, name, publisher,
/// message), QueryTopic(id), QueryAllTopics(), SubscribeToTopic(id, chain),
/// UnsubscribeFromTopic(id, chain), PublishToTopic(id, message).
///
/// PublishToTopic requires the transaction caller to be the topic publisher.
/// It stores the new message, looks up each subscriber's record through the
/// connector contract and emits one `notify` event listing them in
/// subscription order; the host delivers the notifications after commit.
class TopicsContract final : public ledger::Contract {
 public:
  explicit TopicsContract(ContractOptions options = {}) : options_(std::move(options)) {}

  bool has_operation(std::string_view op) const override;
  Bytes execute(ledger::TxContext& ctx, std::string_view op,
                std::span<const Bytes> args) const override;

 private:
  Bytes create(ledger::TxContext& ctx, const Topic& topic) const;
  Bytes publish(ledger::TxContext& ctx, std::string_view topic_id, const Bytes& message) const;

  ContractOptions options_;
};

/// Event body of a committed publish: who to notify and with what.
struct NotifyEvent {
  std::string topic_id;
  Bytes message;
  std::vector<std::string> subscribers;
  // Same order as `subscribers`; nullopt if the record could not be loaded.
  std::vector<std::optional<BlockchainRecord>> records;

  Bytes encode() const;
  static NotifyEvent decode(std::string_view payload);
};

/// Topics + connector contracts sharing the same options.
ledger::ContractSet make_broker_contracts(const ContractOptions& options = {});

}  // namespace interop::contracts
