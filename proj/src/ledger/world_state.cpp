#include "interop/ledger/world_state.hpp"

#include "binary_io.hpp"

namespace interop::ledger {

const Bytes* WorldState::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

KeyValues WorldState::range(std::string_view prefix) const {
  KeyValues out;
  for (auto it = entries_.lower_bound(prefix);
       it != entries_.end() && it->first.starts_with(prefix); ++it) {
    out.emplace_back(it->first, it->second);
  }
  return out;
}

void WorldState::apply(const WriteSet& writes) {
  for (const auto& [k, v] : writes) entries_.insert_or_assign(k, v);
  ++version_;
}

Bytes WorldState::serialize() const {
  Bytes out;
  detail::Writer w(out);
  w.u64(version_);
  w.u64(entries_.size());
  for (const auto& [k, v] : entries_) {
    w.str(k);
    w.str(v);
  }
  return out;
}

Digest WorldState::digest() const { return sha256(serialize()); }

}  // namespace interop::ledger
