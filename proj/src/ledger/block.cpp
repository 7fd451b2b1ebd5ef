#include "interop/ledger/block.hpp"

#include "binary_io.hpp"

namespace interop::ledger {

namespace {

constexpr std::uint32_t kMaxCount = 1u << 24;

}  // namespace

Bytes encode_block(const Block& block) {
  Bytes out;
  detail::Writer w(out);
  w.u64(block.height);
  w.raw(std::string_view(reinterpret_cast<const char*>(block.prev_hash.data()),
                         block.prev_hash.size()));
  w.i64(block.committed_at);
  w.u32(static_cast<std::uint32_t>(block.entries.size()));
  for (const auto& e : block.entries) {
    const auto& tx = e.tx;
    w.str(tx.tx_id);
    w.u8(static_cast<std::uint8_t>(tx.kind));
    w.u8(static_cast<std::uint8_t>(tx.contract));
    w.str(tx.operation);
    w.u32(static_cast<std::uint32_t>(tx.args.size()));
    for (const auto& a : tx.args) w.str(a);
    w.i64(tx.submitted_at);
    w.str(tx.caller);
    w.u8(e.valid ? 1 : 0);
  }
  return out;
}

Block decode_block(std::string_view payload) {
  detail::Reader r(payload);
  Block b;
  b.height = r.u64();
  auto prev = r.raw(b.prev_hash.size());
  std::copy(prev.begin(), prev.end(), reinterpret_cast<char*>(b.prev_hash.data()));
  b.committed_at = r.i64();
  const auto n = r.u32();
  if (n > kMaxCount) throw DecodeError("implausible transaction count");
  b.entries.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    BlockEntry e;
    e.tx.tx_id = r.str();
    const auto kind = r.u8();
    const auto contract = r.u8();
    if (kind > 1 || contract > 1) throw DecodeError("bad transaction tag");
    e.tx.kind = static_cast<TxKind>(kind);
    e.tx.contract = static_cast<ContractId>(contract);
    e.tx.operation = r.str();
    const auto nargs = r.u32();
    if (nargs > kMaxCount) throw DecodeError("implausible argument count");
    for (std::uint32_t k = 0; k < nargs; ++k) e.tx.args.push_back(r.str());
    e.tx.submitted_at = r.i64();
    e.tx.caller = r.str();
    const auto valid = r.u8();
    if (valid > 1) throw DecodeError("bad validity flag");
    e.valid = valid == 1;
    b.entries.push_back(std::move(e));
  }
  if (!r.done()) throw DecodeError("trailing bytes in block payload");
  return b;
}

Digest block_digest(const Block& block) { return sha256(encode_block(block)); }

}  // namespace interop::ledger
