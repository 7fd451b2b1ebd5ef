#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "interop/common/bytes.hpp"
#include "interop/common/digest.hpp"
#include "interop/ledger/types.hpp"

namespace interop::ledger {

struct BlockEntry {
  Transaction tx;
  // false when contract logic rejected the transaction; it keeps its slot.
  bool valid = true;

  bool operator==(const BlockEntry&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash{};
  Nanos committed_at = 0;
  std::vector<BlockEntry> entries;

  bool operator==(const Block&) const = default;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Little-endian binary encoding; the block digest is sha256 over it.
Bytes encode_block(const Block& block);
Block decode_block(std::string_view payload);
Digest block_digest(const Block& block);

}  // namespace interop::ledger
