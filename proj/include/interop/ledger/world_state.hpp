#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interop/common/bytes.hpp"
#include "interop/common/digest.hpp"

namespace interop::ledger {

using WriteSet = std::map<std::string, Bytes, std::less<>>;

using KeyValues = std::vector<std::pair<std::string, Bytes>>;

/// Committed key/value state. `version` counts committed blocks.
class WorldState {
 public:
  const Bytes* find(std::string_view key) const;

  /// Entries whose key starts with `prefix`, in key order.
  KeyValues range(std::string_view prefix) const;

  /// Applies one block's writes and bumps the version.
  void apply(const WriteSet& writes);

  std::uint64_t version() const { return version_; }
  const WriteSet& entries() const { return entries_; }

  /// Length-prefixed dump of every entry followed by the version.
  Bytes serialize() const;
  Digest digest() const;

  bool operator==(const WorldState&) const = default;

 private:
  WriteSet entries_;
  std::uint64_t version_ = 0;
};

}  // namespace interop::ledger
