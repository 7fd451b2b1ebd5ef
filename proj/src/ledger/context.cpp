#include "interop/ledger/context.hpp"

namespace interop::ledger {

TxContext::TxContext(const Transaction& tx, const WorldState& committed, const WriteSet* staged,
                     const ContractSet& contracts, bool read_only)
    : tx_(tx), committed_(committed), staged_(staged), contracts_(contracts), read_only_(read_only) {}

TxContext::TxContext(const TxContext& parent, bool read_only)
    : tx_(parent.tx_),
      committed_(parent.committed_),
      staged_(parent.staged_),
      contracts_(parent.contracts_),
      parent_(&parent),
      read_only_(read_only) {}

std::optional<Bytes> TxContext::get_state(std::string_view key) const {
  if (auto it = writes_.find(key); it != writes_.end()) return it->second;
  if (parent_) return parent_->get_state(key);
  if (staged_) {
    if (auto it = staged_->find(key); it != staged_->end()) return it->second;
  }
  if (const auto* v = committed_.find(key)) return *v;
  return std::nullopt;
}

void TxContext::put_state(std::string_view key, Bytes value) {
  if (read_only_) throw ContractError(RejectCode::Internal, "put_state in read-only context");
  writes_.insert_or_assign(std::string(key), std::move(value));
}

KeyValues TxContext::get_all(std::string_view prefix) const {
  WriteSet merged;
  if (parent_) {
    for (auto& kv : parent_->get_all(prefix)) merged.insert(std::move(kv));
  } else {
    for (auto& kv : committed_.range(prefix)) merged.insert(std::move(kv));
    if (staged_) {
      for (auto it = staged_->lower_bound(prefix);
           it != staged_->end() && it->first.starts_with(prefix); ++it) {
        merged.insert_or_assign(it->first, it->second);
      }
    }
  }
  for (auto it = writes_.lower_bound(prefix); it != writes_.end() && it->first.starts_with(prefix);
       ++it) {
    merged.insert_or_assign(it->first, it->second);
  }
  return {std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end())};
}

Bytes TxContext::query_contract(ContractId contract, std::string_view op,
                                std::vector<Bytes> args) const {
  const auto* target = contracts_.find(contract);
  if (!target || !target->has_operation(op)) {
    throw ContractError(RejectCode::Internal, "unknown inter-contract operation");
  }
  TxContext child(*this, true);
  return target->execute(child, op, args);
}

void TxContext::emit_event(std::string name, Bytes payload) {
  if (read_only_) return;
  events_.push_back({std::move(name), std::move(payload)});
}

}  // namespace interop::ledger
