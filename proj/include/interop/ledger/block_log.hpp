#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "interop/common/digest.hpp"
#include "interop/common/json.hpp"
#include "interop/ledger/block.hpp"

namespace interop::ledger {

/// Receives every block the ledger commits, in height order.
class BlockSink {
 public:
  virtual ~BlockSink() = default;
  virtual void append(const Block& block) = 0;
};

struct GenesisHeader {
  int format = 1;
  std::string digest_algorithm{kDigestAlgorithm};
  Digest genesis_prev_hash = kZeroDigest;

  Json to_json() const;
};

class CorruptLog : public std::runtime_error {
 public:
  CorruptLog(std::uint64_t height, const std::string& what);
  std::uint64_t height() const { return height_; }

 private:
  std::uint64_t height_;
};

struct LoadedLog {
  GenesisHeader header;
  std::vector<Block> blocks;
  std::vector<Digest> digests;
  // Size of an incomplete trailing record left by an interrupted write.
  std::uint64_t torn_bytes = 0;
  std::uint64_t valid_bytes = 0;
};

/// Append-only block file:
///   magic "IOBLOG01" | u32 header_len | header JSON
///   then per block: u32 len | u32 ~len | payload | sha256(payload)
/// Integers are little-endian. A record cut short by a crash is discarded on
/// open; any other inconsistency raises CorruptLog naming the height.
class BlockLog final : public BlockSink {
 public:
  /// Reads the whole file. Throws CorruptLog.
  static LoadedLog read(const std::filesystem::path& path);

  /// Opens (creating if absent) for appending after validating existing
  /// content. A torn tail is truncated.
  static BlockLog open(const std::filesystem::path& path, bool fsync = false);

  BlockLog(BlockLog&& other) noexcept;
  BlockLog& operator=(BlockLog&&) = delete;
  BlockLog(const BlockLog&) = delete;
  ~BlockLog() override;

  void append(const Block& block) override;

  const LoadedLog& loaded() const { return loaded_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  BlockLog(std::filesystem::path path, std::FILE* file, bool fsync, LoadedLog loaded);

  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  bool fsync_ = false;
  LoadedLog loaded_;
};

/// Block rendered for `dump` output.
Json block_to_json(const Block& block, const Digest& digest);

/// The genesis header, then one block per line.
void write_json_lines(const LoadedLog& log, std::ostream& out);

}  // namespace interop::ledger
