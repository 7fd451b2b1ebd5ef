#pragma once

#include "interop/contracts/records.hpp"
#include "interop/ledger/context.hpp"

namespace interop::contracts {

/// Broker-side registry of enrolled networks.
///
/// Operations: InitLedger(samples_json), EnrollBlockchain(record_json),
/// QueryBlockchain(chain_id), QueryAllBlockchains().
class ConnectorContract final : public ledger::Contract {
 public:
  explicit ConnectorContract(ContractOptions options = {}) : options_(std::move(options)) {}

  bool has_operation(std::string_view op) const override;
  Bytes execute(ledger::TxContext& ctx, std::string_view op,
                std::span<const Bytes> args) const override;

  const ContractOptions& options() const { return options_; }

 private:
  Bytes enroll(ledger::TxContext& ctx, const BlockchainRecord& record) const;

  ContractOptions options_;
};

}  // namespace interop::contracts
