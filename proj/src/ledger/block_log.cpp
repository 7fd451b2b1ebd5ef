#include "interop/ledger/block_log.hpp"

#include <unistd.h>

#include <fstream>
#include <iterator>
#include <system_error>

#include "binary_io.hpp"
#include "interop/common/bytes.hpp"

namespace interop::ledger {

namespace {

constexpr std::string_view kMagic = "IOBLOG01";
constexpr std::uint32_t kMaxRecord = 256u << 20;
constexpr std::size_t kRecordOverhead = 8 + 32;

std::uint32_t load_u32(std::string_view s) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(s[i])) << (8 * i);
  return v;
}

Digest digest_from(std::string_view s) {
  Digest d{};
  std::copy(s.begin(), s.end(), reinterpret_cast<char*>(d.data()));
  return d;
}

std::string encode_header(const GenesisHeader& h) {
  std::string out(kMagic);
  const auto body = canonical(h.to_json());
  detail::Writer w(out);
  w.str(body);
  return out;
}

}  // namespace

Json GenesisHeader::to_json() const {
  return Json{{"format", format},
              {"digest", digest_algorithm},
              {"genesis_prev_hash", to_hex(genesis_prev_hash)}};
}

CorruptLog::CorruptLog(std::uint64_t height, const std::string& what)
    : std::runtime_error("corrupt block log at height " + std::to_string(height) + ": " + what),
      height_(height) {}

LoadedLog BlockLog::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string_view all(data);

  LoadedLog log;
  if (all.size() < kMagic.size() + 4 || all.substr(0, kMagic.size()) != kMagic) {
    throw CorruptLog(0, "bad magic");
  }
  const auto hlen = load_u32(all.substr(kMagic.size(), 4));
  std::size_t pos = kMagic.size() + 4;
  if (all.size() - pos < hlen) throw CorruptLog(0, "truncated header");
  auto header = parse_object(all.substr(pos, hlen));
  if (!header || header->value("digest", "") != kDigestAlgorithm ||
      header->value("format", 0) != 1 ||
      header->value("genesis_prev_hash", "") != to_hex(kZeroDigest)) {
    throw CorruptLog(0, "unsupported or damaged genesis header");
  }
  pos += hlen;

  Digest prev = log.header.genesis_prev_hash;
  std::uint64_t height = 1;
  while (pos < all.size()) {
    const auto rest = all.size() - pos;
    if (rest < 8) {
      log.torn_bytes = rest;
      break;
    }
    const auto len = load_u32(all.substr(pos, 4));
    const auto inv = load_u32(all.substr(pos + 4, 4));
    if (len != ~inv || len > kMaxRecord) throw CorruptLog(height, "bad record length");
    if (rest < len + kRecordOverhead) {
      log.torn_bytes = rest;
      break;
    }
    const auto payload = all.substr(pos + 8, len);
    const auto stored = digest_from(all.substr(pos + 8 + len, 32));
    const auto actual = sha256(payload);
    if (stored != actual) throw CorruptLog(height, "digest mismatch");
    Block b;
    try {
      b = decode_block(payload);
    } catch (const DecodeError& e) {
      throw CorruptLog(height, e.what());
    }
    if (b.height != height) throw CorruptLog(height, "non-contiguous height");
    if (b.prev_hash != prev) throw CorruptLog(height, "prev_hash does not match previous block");
    prev = actual;
    log.blocks.push_back(std::move(b));
    log.digests.push_back(actual);
    pos += len + kRecordOverhead;
    ++height;
  }
  log.valid_bytes = pos;
  return log;
}

BlockLog BlockLog::open(const std::filesystem::path& path, bool fsync) {
  LoadedLog loaded;
  if (!std::filesystem::exists(path)) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::system_error(errno, std::generic_category(), "create " + path.string());
    const auto header = encode_header(loaded.header);
    std::fwrite(header.data(), 1, header.size(), f);
    std::fflush(f);
    if (fsync) ::fsync(fileno(f));
    std::fclose(f);
    loaded.valid_bytes = header.size();
  } else {
    loaded = read(path);
    if (loaded.torn_bytes > 0) {
      std::filesystem::resize_file(path, loaded.valid_bytes);
    }
  }
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (!f) throw std::system_error(errno, std::generic_category(), "open " + path.string());
  return BlockLog(path, f, fsync, std::move(loaded));
}

BlockLog::BlockLog(std::filesystem::path path, std::FILE* file, bool fsync, LoadedLog loaded)
    : path_(std::move(path)), file_(file), fsync_(fsync), loaded_(std::move(loaded)) {}

BlockLog::BlockLog(BlockLog&& other) noexcept
    : path_(std::move(other.path_)),
      file_(std::exchange(other.file_, nullptr)),
      fsync_(other.fsync_),
      loaded_(std::move(other.loaded_)) {}

BlockLog::~BlockLog() {
  if (file_) std::fclose(file_);
}

void BlockLog::append(const Block& block) {
  const auto payload = encode_block(block);
  const auto digest = sha256(payload);
  std::string record;
  record.reserve(payload.size() + kRecordOverhead);
  detail::Writer w(record);
  const auto len = static_cast<std::uint32_t>(payload.size());
  w.u32(len);
  w.u32(~len);
  w.raw(payload);
  w.raw(std::string_view(reinterpret_cast<const char*>(digest.data()), digest.size()));
  if (std::fwrite(record.data(), 1, record.size(), file_) != record.size() ||
      std::fflush(file_) != 0) {
    throw std::system_error(errno, std::generic_category(), "append " + path_.string());
  }
  if (fsync_) ::fsync(fileno(file_));
}

Json block_to_json(const Block& block, const Digest& digest) {
  Json txs = Json::array();
  for (const auto& e : block.entries) {
    Json args = Json::array();
    for (const auto& a : e.tx.args) args.push_back(base64_encode(a));
    txs.push_back(Json{{"tx_id", e.tx.tx_id},
                       {"kind", to_string(e.tx.kind)},
                       {"contract", to_string(e.tx.contract)},
                       {"operation", e.tx.operation},
                       {"args_b64", std::move(args)},
                       {"submitted_at", e.tx.submitted_at},
                       {"caller", e.tx.caller},
                       {"valid", e.valid}});
  }
  return Json{{"height", block.height},
              {"prev_hash", to_hex(block.prev_hash)},
              {"digest", to_hex(digest)},
              {"committed_at", block.committed_at},
              {"txs", std::move(txs)}};
}

void write_json_lines(const LoadedLog& log, std::ostream& out) {
  out << canonical(log.header.to_json()) << "\n";
  for (std::size_t i = 0; i < log.blocks.size(); ++i) {
    out << canonical(block_to_json(log.blocks[i], log.digests[i])) << "\n";
  }
}

}  // namespace interop::ledger
