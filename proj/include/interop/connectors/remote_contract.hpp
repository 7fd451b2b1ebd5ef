#pragma once

#include "interop/ledger/context.hpp"

namespace interop::connectors {

inline constexpr std::string_view kAppNotificationEvent = "app_notification";

/// Connector contract deployed on a publisher or subscriber network.
///
/// Subscriber side keeps "sub:<topic>" = {active, message_b64, updates}:
///   RecordSubscription(topic), RemoveSubscription(topic),
///   ReceiveUpdate(topic, message), GetSubscription(topic).
/// ReceiveUpdate on a topic this chain has not subscribed to is rejected
/// NotFound("unknown topic"); an identical repeat update is a no-op.
///
/// Publisher side keeps intents, owned topics and broker receipts:
///   RecordIntent(action, topic, payload), AddOwnedTopic(topic),
///   StoreReceipt(topic, receipt_json), QueryOwnedTopics().
class RemoteConnectorContract final : public ledger::Contract {
 public:
  bool has_operation(std::string_view op) const override;
  Bytes execute(ledger::TxContext& ctx, std::string_view op,
                std::span<const Bytes> args) const override;
};

}  // namespace interop::connectors
