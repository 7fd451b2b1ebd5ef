#include "interop/contracts/topics_contract.hpp"

#include <algorithm>
#include <array>

#include "interop/contracts/connector_contract.hpp"

namespace interop::contracts {

using ledger::ContractError;
using ledger::ContractId;
using ledger::RejectCode;
using ledger::TxContext;

namespace {

constexpr std::array<std::string_view, 7> kOps = {
    "InitLedger",       "CreateTopic",          "QueryTopic",   "QueryAllTopics",
    "SubscribeToTopic", "UnsubscribeFromTopic", "PublishToTopic"};

void expect_args(std::span<const Bytes> args, std::size_t n) {
  if (args.size() != n) {
    throw ContractError(RejectCode::BadRequest, "expected " + std::to_string(n) + " arguments");
  }
}

void store(TxContext& ctx, std::string_view key, const Json& value) {
  try {
    ctx.put_state(key, canonical(value));
  } catch (const Json::type_error&) {
    throw ContractError(RejectCode::BadRequest, "strings must be valid UTF-8");
  }
}

std::optional<Topic> load_topic(const TxContext& ctx, std::string_view topic_id) {
  auto raw = ctx.get_state(topic_key(topic_id));
  if (!raw) return std::nullopt;
  return Topic::from_json(Json::parse(*raw));
}

Topic require_topic(const TxContext& ctx, std::string_view topic_id) {
  auto t = load_topic(ctx, topic_id);
  if (!t) throw ContractError(RejectCode::NotFound, "topic not found");
  return std::move(*t);
}

// Inter-contract lookup through the connector, as the publisher/subscriber
// fields may only reference records the connector holds.
std::optional<BlockchainRecord> lookup_chain(const TxContext& ctx, const std::string& chain_id) {
  try {
    const auto raw = ctx.query_contract(ContractId::Connector, "QueryBlockchain", {chain_id});
    return BlockchainRecord::from_json(Json::parse(raw));
  } catch (const ContractError& e) {
    if (e.code() == RejectCode::NotFound) return std::nullopt;
    throw;
  }
}

void subscribe(TxContext& ctx, Topic& topic, const std::string& chain_id) {
  auto record = lookup_chain(ctx, chain_id);
  if (!record) throw ContractError(RejectCode::NotFound, "subscriber not enrolled");
  if (!can_subscribe(record->role)) {
    throw ContractError(RejectCode::Forbidden, "subscriber lacks subscriber role");
  }
  if (std::find(topic.subscribers.begin(), topic.subscribers.end(), chain_id) !=
      topic.subscribers.end()) {
    return;
  }
  topic.subscribers.push_back(chain_id);
  store(ctx, topic_key(topic.topic_id), topic.to_json());
}

}  // namespace

bool TopicsContract::has_operation(std::string_view op) const {
  return std::find(kOps.begin(), kOps.end(), op) != kOps.end();
}

Bytes TopicsContract::create(TxContext& ctx, const Topic& topic) const {
  if (topic.topic_id.empty()) throw ContractError(RejectCode::BadRequest, "empty topic_id");
  if (ctx.get_state(topic_key(topic.topic_id))) {
    throw ContractError(RejectCode::Conflict, "topic exists");
  }
  auto publisher = lookup_chain(ctx, topic.publisher);
  if (!publisher) throw ContractError(RejectCode::NotFound, "publisher not enrolled");
  if (!can_publish(publisher->role)) {
    throw ContractError(RejectCode::Forbidden, "publisher lacks publisher role");
  }
  if (topic.message.size() > options_.max_message_bytes) {
    throw ContractError(RejectCode::BadRequest, "message too large");
  }
  Topic stored = topic;
  stored.subscribers.clear();
  store(ctx, topic_key(stored.topic_id), stored.to_json());
  return {};
}

Bytes TopicsContract::publish(TxContext& ctx, std::string_view topic_id,
                              const Bytes& message) const {
  auto topic = require_topic(ctx, topic_id);
  if (ctx.caller() != topic.publisher) {
    throw ContractError(RejectCode::Forbidden, "not topic publisher");
  }
  if (message.size() > options_.max_message_bytes) {
    throw ContractError(RejectCode::BadRequest, "message too large");
  }
  topic.message = message;
  store(ctx, topic_key(topic.topic_id), topic.to_json());

  NotifyEvent ev;
  ev.topic_id = topic.topic_id;
  ev.message = message;
  ev.subscribers = topic.subscribers;
  for (const auto& sub : topic.subscribers) ev.records.push_back(lookup_chain(ctx, sub));
  ctx.emit_event(std::string(kNotifyEvent), ev.encode());
  ctx.report_fanout(topic.subscribers.size());
  return canonical(Json{{"notified", topic.subscribers.size()}});
}

Bytes TopicsContract::execute(TxContext& ctx, std::string_view op,
                              std::span<const Bytes> args) const {
  if (op == "InitLedger") {
    expect_args(args, 1);
    if (ctx.get_state(kTopicsMarker)) {
      throw ContractError(RejectCode::Conflict, "already initialized");
    }
    const Json doc = Json::parse(args[0], nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("topics") ||
        !doc["topics"].is_array()) {
      throw ContractError(RejectCode::BadRequest, "samples must hold a topics array");
    }
    ctx.put_state(kTopicsMarker, canonical(Json{{"contract", "topics"}, {"version", 1}}));
    for (const auto& j : doc["topics"]) {
      auto t = Topic::from_json(j);
      create(ctx, t);
      auto stored = require_topic(ctx, t.topic_id);
      for (const auto& s : t.subscribers) subscribe(ctx, stored, s);
    }
    return {};
  }
  if (op == "CreateTopic") {
    expect_args(args, 4);
    return create(ctx, Topic{args[0], args[1], args[2], {}, args[3]});
  }
  if (op == "QueryTopic") {
    expect_args(args, 1);
    auto raw = ctx.get_state(topic_key(args[0]));
    if (!raw) throw ContractError(RejectCode::NotFound, "topic not found");
    return *raw;
  }
  if (op == "QueryAllTopics") {
    expect_args(args, 0);
    Json all = Json::array();
    for (const auto& [k, v] : ctx.get_all(kTopicPrefix)) all.push_back(Json::parse(v));
    return canonical(all);
  }
  if (op == "SubscribeToTopic") {
    expect_args(args, 2);
    auto topic = require_topic(ctx, args[0]);
    subscribe(ctx, topic, args[1]);
    return {};
  }
  if (op == "UnsubscribeFromTopic") {
    expect_args(args, 2);
    auto topic = require_topic(ctx, args[0]);
    auto it = std::find(topic.subscribers.begin(), topic.subscribers.end(), args[1]);
    if (it != topic.subscribers.end()) {
      topic.subscribers.erase(it);
      store(ctx, topic_key(topic.topic_id), topic.to_json());
    }
    return {};
  }
  if (op == "PublishToTopic") {
    expect_args(args, 2);
    return publish(ctx, args[0], args[1]);
  }
  throw ContractError(RejectCode::BadRequest, "unknown operation");
}

Bytes NotifyEvent::encode() const {
  Json records_json = Json::array();
  for (const auto& r : records) records_json.push_back(r ? r->to_json() : Json(nullptr));
  return canonical(Json{{"topic_id", topic_id},
                        {"message_b64", base64_encode(message)},
                        {"subscribers", subscribers},
                        {"records", std::move(records_json)}});
}

NotifyEvent NotifyEvent::decode(std::string_view payload) {
  const auto j = Json::parse(payload);
  NotifyEvent ev;
  ev.topic_id = j.at("topic_id").get<std::string>();
  ev.message = base64_decode(j.at("message_b64").get<std::string>()).value_or(Bytes{});
  ev.subscribers = j.at("subscribers").get<std::vector<std::string>>();
  for (const auto& r : j.at("records")) {
    ev.records.push_back(r.is_null() ? std::nullopt
                                     : std::optional(BlockchainRecord::from_json(r)));
  }
  return ev;
}

ledger::ContractSet make_broker_contracts(const ContractOptions& options) {
  return {std::make_shared<TopicsContract>(options), std::make_shared<ConnectorContract>(options)};
}

}  // namespace interop::contracts
