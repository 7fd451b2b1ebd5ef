#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interop/common/bytes.hpp"
#include "interop/common/clock.hpp"

namespace interop::ledger {

enum class TxKind : std::uint8_t { Invoke = 0, Query = 1 };

enum class ContractId : std::uint8_t { Topics = 0, Connector = 1 };

std::string_view to_string(TxKind kind);
std::string_view to_string(ContractId contract);

inline constexpr std::string_view kExternalCaller = "external";

struct Transaction {
  std::string tx_id;
  TxKind kind = TxKind::Invoke;
  ContractId contract = ContractId::Topics;
  std::string operation;
  std::vector<Bytes> args;
  Nanos submitted_at = 0;
  std::string caller{kExternalCaller};

  bool operator==(const Transaction&) const = default;
};

enum class TxStatus : std::uint8_t { Committed, QueryOk, Rejected, Dropped };

/// Why a transaction was rejected. Maps onto the wire status taxonomy.
enum class RejectCode : std::uint8_t { None, BadRequest, NotFound, Conflict, Forbidden, Internal };

std::string_view to_string(TxStatus status);
std::string_view to_string(RejectCode code);

struct DeliveryStatus {
  enum class State : std::uint8_t { Delivered, Failed };

  State state = State::Delivered;
  std::string reason;

  static DeliveryStatus delivered() { return {}; }
  static DeliveryStatus failed(std::string why) { return {State::Failed, std::move(why)}; }

  bool ok() const { return state == State::Delivered; }
  bool operator==(const DeliveryStatus&) const = default;
};

struct Delivery {
  std::string chain_id;
  DeliveryStatus status;

  bool operator==(const Delivery&) const = default;
};

/// Named event a contract emits while executing; surfaced in the receipt.
struct TxEvent {
  std::string name;
  Bytes payload;
};

struct TxReceipt {
  std::string tx_id;
  TxStatus status = TxStatus::Rejected;
  RejectCode code = RejectCode::None;
  std::string reason;
  Nanos latency_ns = 1;
  Nanos completed_at = 0;
  std::optional<std::uint64_t> block_height;
  std::optional<Bytes> payload;
  std::vector<Delivery> deliveries;
  // Service units the invoke pipeline spent on this transaction.
  double service_units = 0.0;
  std::vector<TxEvent> events;

  bool terminal_success() const {
    return status == TxStatus::Committed || status == TxStatus::QueryOk;
  }
};

}  // namespace interop::ledger
