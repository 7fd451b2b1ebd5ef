#include "interop/connectors/sim_chain.hpp"

#include "interop/common/digest.hpp"
#include "interop/connectors/remote_contract.hpp"

namespace interop::connectors {

using broker::BrokerReply;
using ledger::TxReceipt;
using ledger::TxStatus;
using transport::MessageKind;
namespace status = transport::status;

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::FabricLike ? "FabricLike" : "BesuLike";
}

std::string_view chain_type_tag(Flavor flavor) {
  return flavor == Flavor::FabricLike ? contracts::kFabricType : contracts::kBesuType;
}

ledger::CapacityModel default_capacity(Flavor flavor) {
  ledger::CapacityModel m;
  m.query_service_rate = 2000.0;
  m.queue_capacity = 1000;
  if (flavor == Flavor::FabricLike) {
    // Ordered batches cut quickly.
    m.invoke_service_rate = 500.0;
    m.block_interval_ms = 20;
    m.max_block_size = 10;
  } else {
    // Slower, fixed block period; every update waits for the next block.
    m.invoke_service_rate = 200.0;
    m.block_interval_ms = 60;
    m.max_block_size = 50;
  }
  return m;
}

namespace {

ledger::ContractSet local_contracts() {
  return {nullptr, std::make_shared<RemoteConnectorContract>()};
}

std::map<std::string, std::string> flavor_extra(const SimChainConfig& c) {
  std::map<std::string, std::string> extra;
  if (c.flavor == Flavor::FabricLike) {
    extra = {{"channel", "interop"}, {"chaincode", "connector"}};
  } else {
    const auto h = to_hex(sha256("address:" + c.chain_id));
    extra = {{"address", "0x" + h.substr(0, 40)},
             {"abi", "SubscriberConnector.abi.json"},
             {"private_key", to_hex(sha256("key:" + c.chain_id))}};
  }
  for (const auto& [k, v] : c.extra) extra.insert_or_assign(k, v);
  return extra;
}

}  // namespace

SimChain::SimChain(SimChainConfig config, std::shared_ptr<transport::Transport> transport,
                   const Clock& clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(clock),
      ledger_(config_.capacity.value_or(default_capacity(config_.flavor)), local_contracts()),
      driver_(ledger_, clock_, [this](std::vector<TxReceipt> r) { on_receipts(std::move(r)); }),
      client_(transport_, config_.broker, config_.broker_retry, config_.chain_id) {}

SimChain::~SimChain() { stop(); }

void SimChain::start() {
  driver_.start();
  std::lock_guard lock(mu_);
  if (serving_ || !contracts::can_subscribe(config_.role)) return;
  auto handler = [this](const transport::WireMessage& m) { return handle_update(m); };
  if (auto* sim = dynamic_cast<transport::SimTransport*>(transport_.get())) {
    sim->serve(endpoint(), handler, config_.faults);
  } else {
    transport_->serve(endpoint(), handler);
  }
  serving_ = true;
}

void SimChain::stop() {
  bool was_serving = false;
  {
    std::lock_guard lock(mu_);
    was_serving = std::exchange(serving_, false);
  }
  if (was_serving) transport_->unserve(endpoint());
  driver_.stop();
}

contracts::BlockchainRecord SimChain::record() const {
  return {config_.chain_id, config_.name, std::string(chain_type_tag(config_.flavor)),
          config_.host,     config_.port, flavor_extra(config_), config_.role};
}

transport::Endpoint SimChain::endpoint() const {
  const auto r = record();
  return {config_.host, config_.port,
          config_.flavor == Flavor::FabricLike ? fabric_base_path(r) : besu_base_path(r)};
}

void SimChain::enroll() { client_.require(MessageKind::EnrollReq, broker::api::enroll(record())); }

void SimChain::on_receipts(std::vector<TxReceipt> receipts) {
  std::lock_guard lock(mu_);
  for (auto& r : receipts) {
    auto it = waiting_.find(r.tx_id);
    if (it == waiting_.end()) continue;
    it->second.set_value(std::move(r));
    waiting_.erase(it);
  }
}

TxReceipt SimChain::local_invoke(std::string op, std::vector<Bytes> args) {
  ledger::Transaction tx;
  std::future<TxReceipt> done;
  {
    std::lock_guard lock(mu_);
    tx.tx_id = config_.chain_id + "-tx-" + std::to_string(next_tx_++);
    done = waiting_[tx.tx_id].get_future();
  }
  tx.kind = ledger::TxKind::Invoke;
  tx.contract = ledger::ContractId::Connector;
  tx.operation = std::move(op);
  tx.args = std::move(args);
  tx.caller = config_.chain_id;
  const auto id = tx.tx_id;
  driver_.submit(std::move(tx));
  if (done.wait_for(config_.local_commit_timeout) != std::future_status::ready) {
    std::lock_guard lock(mu_);
    waiting_.erase(id);
    throw std::runtime_error("local commit timed out on " + config_.chain_id);
  }
  return done.get();
}

std::string SimChain::handle_update(const transport::WireMessage& request) {
  if (request.kind != MessageKind::UpdateNotify) {
    return transport::reply_body(status::kBadRequest, Json{{"reason", "expected UpdateNotify"}});
  }
  auto body = parse_object(request.body);
  if (!body) return transport::reply_body(status::kBadRequest, Json{{"reason", "body not JSON"}});

  std::string topic_id;
  std::optional<Bytes> message;
  const auto rec = record();
  try {
    if (config_.flavor == Flavor::FabricLike) {
      if (body->value("fcn", "") != "ReceiveUpdate" || !(*body)["args"].is_array() ||
          (*body)["args"].size() != 2 || body->value("channel", "") != rec.extra.at("channel") ||
          body->value("chaincode", "") != rec.extra.at("chaincode")) {
        return transport::reply_body(status::kBadRequest, Json{{"reason", "bad invoke request"}});
      }
      topic_id = (*body)["args"][0].get<std::string>();
      message = base64_decode((*body)["args"][1].get<std::string>());
    } else {
      if (body->value("method", "") != "receiveUpdate" ||
          body->value("to", "") != rec.extra.at("address") || !body->contains("params")) {
        return transport::reply_body(status::kBadRequest, Json{{"reason", "bad transaction"}});
      }
      const auto signature = body->value("signature", "");
      Json unsigned_tx = *body;
      unsigned_tx.erase("signature");
      if (signature != besu_signature(rec.extra.at("private_key"), canonical(unsigned_tx))) {
        return transport::reply_body(status::kForbidden, Json{{"reason", "bad signature"}});
      }
      topic_id = (*body)["params"].at("topicId").get<std::string>();
      message = base64_decode((*body)["params"].at("message_b64").get<std::string>());
    }
  } catch (const Json::exception&) {
    return transport::reply_body(status::kBadRequest, Json{{"reason", "malformed request"}});
  }
  if (!message) return transport::reply_body(status::kBadRequest, Json{{"reason", "bad base64"}});

  const auto r = local_invoke("ReceiveUpdate", {topic_id, *message});
  if (r.status != TxStatus::Committed) {
    if (r.code == ledger::RejectCode::NotFound) {
      return transport::reply_body(status::kUnknownTopic, Json{{"topic_id", topic_id}});
    }
    return transport::reply_body(status::kError, Json{{"reason", r.reason}});
  }
  std::lock_guard lock(mu_);
  const bool fresh = !r.events.empty();
  if (fresh) {
    auto& sub = subscriptions_[topic_id];
    sub.latest_message = *message;
    sub.last_updated = *r.block_height;
    ++sub.updates;
    events_.push_back({topic_id, *message, *r.block_height});
  }
  return transport::reply_body(status::kOk, Json{{"topic_id", topic_id}});
}

void SimChain::local_subscribe(const std::string& topic_id) {
  auto r = local_invoke("RecordSubscription", {topic_id});
  if (r.status != TxStatus::Committed) throw LocalRejection(r.reason);
  {
    std::lock_guard lock(mu_);
    subscriptions_.try_emplace(topic_id);
  }
  try {
    client_.require(MessageKind::SubscribeReq, broker::api::subscribe(topic_id, config_.chain_id));
  } catch (...) {
    local_invoke("RemoveSubscription", {topic_id});
    std::lock_guard lock(mu_);
    subscriptions_.erase(topic_id);
    throw;
  }
}

void SimChain::local_unsubscribe(const std::string& topic_id) {
  client_.require(MessageKind::UnsubscribeReq,
                  broker::api::unsubscribe(topic_id, config_.chain_id));
  local_invoke("RemoveSubscription", {topic_id});
  std::lock_guard lock(mu_);
  subscriptions_.erase(topic_id);
}

std::optional<Subscription> SimChain::subscription(const std::string& topic_id) const {
  std::lock_guard lock(mu_);
  auto it = subscriptions_.find(topic_id);
  if (it == subscriptions_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, Subscription> SimChain::subscriptions() const {
  std::lock_guard lock(mu_);
  return subscriptions_;
}

std::vector<AppEvent> SimChain::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

Json SimChain::reply_summary(const BrokerReply& reply) const { return reply.body; }

void SimChain::create_topic(const std::string& topic_id, const std::string& name,
                            const Bytes& initial) {
  if (!contracts::can_publish(config_.role)) throw LocalRejection("chain is not a publisher");
  if (local_invoke("RecordIntent", {"create", topic_id, initial}).status != TxStatus::Committed) {
    throw LocalRejection("local connector rejected intent");
  }
  const auto reply = client_.require(
      MessageKind::CreateTopicReq,
      broker::api::create_topic(topic_id, name, config_.chain_id, initial));
  local_invoke("AddOwnedTopic", {topic_id});
  local_invoke("StoreReceipt", {topic_id, canonical(reply.body)});
  std::lock_guard lock(mu_);
  owned_.insert(topic_id);
  receipts_.push_back(reply_summary(reply));
}

void SimChain::publish(const std::string& topic_id, const Bytes& message) {
  {
    std::lock_guard lock(mu_);
    if (!owned_.contains(topic_id)) throw LocalRejection("topic not owned: " + topic_id);
  }
  if (local_invoke("RecordIntent", {"publish", topic_id, message}).status !=
      TxStatus::Committed) {
    throw LocalRejection("local connector rejected intent");
  }
  const auto reply = client_.require(MessageKind::PublishReq,
                                     broker::api::publish(topic_id, message, config_.chain_id));
  local_invoke("StoreReceipt", {topic_id, canonical(reply.body)});
  std::lock_guard lock(mu_);
  receipts_.push_back(reply_summary(reply));
}

std::set<std::string> SimChain::owned_topics() const {
  std::lock_guard lock(mu_);
  return owned_;
}

std::vector<Json> SimChain::broker_receipts() const {
  std::lock_guard lock(mu_);
  return receipts_;
}

}  // namespace interop::connectors
