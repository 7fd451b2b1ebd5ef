#include "interop/connectors/remote_contract.hpp"

#include <algorithm>
#include <array>

#include "interop/common/json.hpp"

namespace interop::connectors {

using ledger::ContractError;
using ledger::RejectCode;

namespace {

constexpr std::array<std::string_view, 8> kOps = {
    "RecordSubscription", "RemoveSubscription", "ReceiveUpdate",  "GetSubscription",
    "RecordIntent",       "AddOwnedTopic",      "StoreReceipt",   "QueryOwnedTopics"};

void expect_args(std::span<const Bytes> args, std::size_t n) {
  if (args.size() != n) {
    throw ContractError(RejectCode::BadRequest, "expected " + std::to_string(n) + " arguments");
  }
}

std::string sub_key(std::string_view topic) { return "sub:" + std::string(topic); }

std::optional<Json> active_subscription(const ledger::TxContext& ctx, std::string_view topic) {
  auto raw = ctx.get_state(sub_key(topic));
  if (!raw) return std::nullopt;
  auto j = Json::parse(*raw);
  if (!j.value("active", false)) return std::nullopt;
  return j;
}

}  // namespace

bool RemoteConnectorContract::has_operation(std::string_view op) const {
  return std::find(kOps.begin(), kOps.end(), op) != kOps.end();
}

Bytes RemoteConnectorContract::execute(ledger::TxContext& ctx, std::string_view op,
                                       std::span<const Bytes> args) const {
  if (op == "RecordSubscription") {
    expect_args(args, 1);
    if (!active_subscription(ctx, args[0])) {
      ctx.put_state(sub_key(args[0]),
                    canonical(Json{{"active", true}, {"message_b64", ""}, {"updates", 0}}));
    }
    return {};
  }
  if (op == "RemoveSubscription") {
    expect_args(args, 1);
    if (active_subscription(ctx, args[0])) {
      ctx.put_state(sub_key(args[0]),
                    canonical(Json{{"active", false}, {"message_b64", ""}, {"updates", 0}}));
    }
    return {};
  }
  if (op == "ReceiveUpdate") {
    expect_args(args, 2);
    auto sub = active_subscription(ctx, args[0]);
    if (!sub) throw ContractError(RejectCode::NotFound, "unknown topic");
    const auto encoded = base64_encode(args[1]);
    if ((*sub)["updates"].get<std::int64_t>() > 0 && (*sub)["message_b64"] == encoded) {
      return canonical(Json{{"duplicate", true}});
    }
    (*sub)["message_b64"] = encoded;
    (*sub)["updates"] = (*sub)["updates"].get<std::int64_t>() + 1;
    ctx.put_state(sub_key(args[0]), canonical(*sub));
    ctx.emit_event(std::string(kAppNotificationEvent),
                   canonical(Json{{"topic_id", args[0]}, {"message_b64", encoded}}));
    return canonical(Json{{"duplicate", false}});
  }
  if (op == "GetSubscription") {
    expect_args(args, 1);
    auto sub = active_subscription(ctx, args[0]);
    if (!sub) throw ContractError(RejectCode::NotFound, "unknown topic");
    return canonical(*sub);
  }
  if (op == "RecordIntent") {
    expect_args(args, 3);
    ctx.put_state("intent:" + ctx.tx().tx_id,
                  canonical(Json{{"action", args[0]},
                                 {"topic_id", args[1]},
                                 {"payload_b64", base64_encode(args[2])}}));
    return {};
  }
  if (op == "AddOwnedTopic") {
    expect_args(args, 1);
    ctx.put_state("owned:" + args[0], "1");
    return {};
  }
  if (op == "StoreReceipt") {
    expect_args(args, 2);
    ctx.put_state("receipt:" + ctx.tx().tx_id,
                  canonical(Json{{"topic_id", args[0]}, {"receipt", Json::parse(args[1])}}));
    return {};
  }
  if (op == "QueryOwnedTopics") {
    expect_args(args, 0);
    Json out = Json::array();
    for (const auto& [k, v] : ctx.get_all("owned:")) out.push_back(k.substr(6));
    return canonical(out);
  }
  throw ContractError(RejectCode::BadRequest, "unknown operation");
}

}  // namespace interop::connectors
