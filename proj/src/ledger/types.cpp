#include "interop/ledger/types.hpp"

#include <stdexcept>
#include <string>

#include "interop/ledger/capacity_model.hpp"

namespace interop::ledger {

std::string_view to_string(TxKind kind) {
  return kind == TxKind::Invoke ? "invoke" : "query";
}

std::string_view to_string(ContractId contract) {
  return contract == ContractId::Topics ? "topics" : "connector";
}

std::string_view to_string(TxStatus status) {
  switch (status) {
    case TxStatus::Committed: return "committed";
    case TxStatus::QueryOk: return "query_ok";
    case TxStatus::Rejected: return "rejected";
    case TxStatus::Dropped: return "dropped";
  }
  return "unknown";
}

std::string_view to_string(RejectCode code) {
  switch (code) {
    case RejectCode::None: return "none";
    case RejectCode::BadRequest: return "bad_request";
    case RejectCode::NotFound: return "not_found";
    case RejectCode::Conflict: return "conflict";
    case RejectCode::Forbidden: return "forbidden";
    case RejectCode::Internal: return "internal";
  }
  return "unknown";
}

void CapacityModel::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(invoke_service_rate, "invoke_service_rate");
  positive(query_service_rate, "query_service_rate");
  positive(publish_base_cost, "publish_base_cost");
  positive(publish_per_subscriber_cost, "publish_per_subscriber_cost");
  if (overload_penalty_units < 0.0) {
    throw std::invalid_argument("overload_penalty_units must be >= 0");
  }
  if (block_interval_ms <= 0) throw std::invalid_argument("block_interval_ms must be > 0");
  if (max_block_size == 0) throw std::invalid_argument("max_block_size must be > 0");
  if (queue_capacity < max_block_size) {
    throw std::invalid_argument("queue_capacity must be >= max_block_size");
  }
}

}  // namespace interop::ledger
