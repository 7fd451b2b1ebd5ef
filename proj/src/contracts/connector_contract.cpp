#include "interop/contracts/connector_contract.hpp"

#include <array>

namespace interop::contracts {

using ledger::ContractError;
using ledger::RejectCode;
using ledger::TxContext;

namespace {

constexpr std::array<std::string_view, 4> kOps = {"InitLedger", "EnrollBlockchain",
                                                  "QueryBlockchain", "QueryAllBlockchains"};

void expect_args(std::span<const Bytes> args, std::size_t n) {
  if (args.size() != n) {
    throw ContractError(RejectCode::BadRequest, "expected " + std::to_string(n) + " arguments");
  }
}

Json parse_json_arg(const Bytes& arg) {
  Json j = Json::parse(arg, nullptr, false);
  if (j.is_discarded()) throw ContractError(RejectCode::BadRequest, "argument is not JSON");
  return j;
}

}  // namespace

bool ConnectorContract::has_operation(std::string_view op) const {
  for (auto k : kOps) {
    if (k == op) return true;
  }
  return false;
}

Bytes ConnectorContract::enroll(TxContext& ctx, const BlockchainRecord& record) const {
  if (record.chain_id.empty()) throw ContractError(RejectCode::BadRequest, "empty chain_id");
  const auto key = chain_key(record.chain_id);
  if (ctx.get_state(key)) throw ContractError(RejectCode::Conflict, "already enrolled");
  const auto* type = options_.find_type(record.chain_type);
  if (!type) throw ContractError(RejectCode::BadRequest, "unsupported type");
  for (const auto& k : type->required_extra) {
    if (!record.extra.contains(k)) throw ContractError(RejectCode::BadRequest, "missing extra: " + k);
  }
  ctx.put_state(key, canonical(record.to_json()));
  return record.chain_id;
}

Bytes ConnectorContract::execute(TxContext& ctx, std::string_view op,
                                 std::span<const Bytes> args) const {
  if (op == "InitLedger") {
    expect_args(args, 1);
    if (ctx.get_state(kConnectorMarker)) {
      throw ContractError(RejectCode::Conflict, "already initialized");
    }
    const auto doc = parse_json_arg(args[0]);
    auto chains = doc.find("chains");
    if (!doc.is_object() || chains == doc.end() || !chains->is_array()) {
      throw ContractError(RejectCode::BadRequest, "samples must hold a chains array");
    }
    ctx.put_state(kConnectorMarker, canonical(Json{{"contract", "connector"}, {"version", 1}}));
    for (const auto& c : *chains) enroll(ctx, BlockchainRecord::from_json(c));
    return {};
  }
  if (op == "EnrollBlockchain") {
    expect_args(args, 1);
    return enroll(ctx, BlockchainRecord::from_json(parse_json_arg(args[0])));
  }
  if (op == "QueryBlockchain") {
    expect_args(args, 1);
    auto v = ctx.get_state(chain_key(args[0]));
    if (!v) throw ContractError(RejectCode::NotFound, "not found");
    return *v;
  }
  if (op == "QueryAllBlockchains") {
    expect_args(args, 0);
    Json all = Json::array();
    for (const auto& [k, v] : ctx.get_all(kChainPrefix)) all.push_back(Json::parse(v));
    return canonical(all);
  }
  throw ContractError(RejectCode::BadRequest, "unknown operation");
}

}  // namespace interop::contracts
