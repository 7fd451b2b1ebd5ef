#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "interop/common/bytes.hpp"
#include "interop/ledger/types.hpp"
#include "interop/ledger/world_state.hpp"

namespace interop::ledger {

/// Thrown by contract code to reject the running transaction.
class ContractError : public std::runtime_error {
 public:
  ContractError(RejectCode code, const std::string& reason)
      : std::runtime_error(reason), code_(code) {}
  RejectCode code() const { return code_; }

 private:
  RejectCode code_;
};

class TxContext;

/// A deterministic state-transition function over the ledger's key/value API.
/// Implementations hold no mutable state.
class Contract {
 public:
  virtual ~Contract() = default;
  virtual bool has_operation(std::string_view op) const = 0;
  virtual Bytes execute(TxContext& ctx, std::string_view op, std::span<const Bytes> args) const = 0;
};

struct ContractSet {
  std::shared_ptr<const Contract> topics;
  std::shared_ptr<const Contract> connector;

  const Contract* find(ContractId id) const {
    return id == ContractId::Topics ? topics.get() : connector.get();
  }
};

/// View handed to contract code for one transaction.
///
/// Reads go through this transaction's own writes, then the staged writes of
/// earlier transactions in the open block, then committed state. Writes are
/// buffered and only reach the ledger if the transaction succeeds.
class TxContext {
 public:
  TxContext(const Transaction& tx, const WorldState& committed, const WriteSet* staged,
            const ContractSet& contracts, bool read_only);

  std::optional<Bytes> get_state(std::string_view key) const;
  void put_state(std::string_view key, Bytes value);
  KeyValues get_all(std::string_view prefix) const;

  /// Read-only call into another contract, seeing this transaction's view.
  Bytes query_contract(ContractId contract, std::string_view op, std::vector<Bytes> args) const;

  void emit_event(std::string name, Bytes payload);

  /// Declares the subscriber fan-out so the pipeline charges publish cost.
  void report_fanout(std::size_t subscribers) { fanout_ = subscribers; }

  const Transaction& tx() const { return tx_; }
  std::string_view caller() const { return tx_.caller; }
  bool read_only() const { return read_only_; }

  WriteSet take_writes() { return std::move(writes_); }
  std::vector<TxEvent> take_events() { return std::move(events_); }
  std::optional<std::size_t> fanout() const { return fanout_; }

 private:
  TxContext(const TxContext& parent, bool read_only);

  const Transaction& tx_;
  const WorldState& committed_;
  const WriteSet* staged_;
  const ContractSet& contracts_;
  const TxContext* parent_ = nullptr;
  bool read_only_;
  WriteSet writes_;
  std::vector<TxEvent> events_;
  std::optional<std::size_t> fanout_;
};

}  // namespace interop::ledger
