#include "interop/broker/broker.hpp"

#include <future>

#include "interop/contracts/topics_contract.hpp"

namespace interop::broker {

using ledger::ContractId;
using ledger::RejectCode;
using ledger::Transaction;
using ledger::TxKind;
using ledger::TxReceipt;
using ledger::TxStatus;
using transport::MessageKind;
namespace status = transport::status;

std::string_view reply_status(const TxReceipt& r) {
  switch (r.status) {
    case TxStatus::Committed:
    case TxStatus::QueryOk: return status::kOk;
    case TxStatus::Dropped: return status::kOverloaded;
    case TxStatus::Rejected: break;
  }
  switch (r.code) {
    case RejectCode::BadRequest: return status::kBadRequest;
    case RejectCode::NotFound: return status::kNotFound;
    case RejectCode::Conflict: return status::kConflict;
    case RejectCode::Forbidden: return status::kForbidden;
    default: return status::kError;
  }
}

namespace {

bool has_notify(const TxReceipt& r) {
  for (const auto& e : r.events) {
    if (e.name == contracts::kNotifyEvent) return true;
  }
  return false;
}

std::optional<std::string> text(const Json& body, std::string_view key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<Bytes> message(const Json& body) {
  auto b64 = text(body, "message_b64");
  if (!b64) return std::nullopt;
  return base64_decode(*b64);
}

Transaction make(TxKind kind, ContractId contract, std::string op, std::vector<Bytes> args) {
  Transaction tx;
  tx.kind = kind;
  tx.contract = contract;
  tx.operation = std::move(op);
  tx.args = std::move(args);
  return tx;
}

std::optional<Transaction> query(const Json& body, std::string& error) {
  const auto what = text(body, "query");
  if (!what) {
    error = "missing field: query";
    return std::nullopt;
  }
  if (*what == "topics") return make(TxKind::Query, ContractId::Topics, "QueryAllTopics", {});
  if (*what == "blockchains") {
    return make(TxKind::Query, ContractId::Connector, "QueryAllBlockchains", {});
  }
  if (*what == "topic") {
    if (auto id = text(body, "topic_id")) {
      return make(TxKind::Query, ContractId::Topics, "QueryTopic", {*id});
    }
    error = "missing field: topic_id";
    return std::nullopt;
  }
  if (*what == "blockchain") {
    if (auto id = text(body, "chain_id")) {
      return make(TxKind::Query, ContractId::Connector, "QueryBlockchain", {*id});
    }
    error = "missing field: chain_id";
    return std::nullopt;
  }
  error = "unknown query: " + *what;
  return std::nullopt;
}

}  // namespace

std::string reply_for(const TxReceipt& r) {
  Json out = Json::object();
  out["tx_id"] = r.tx_id;
  if (r.block_height) out["block_height"] = *r.block_height;
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (has_notify(r)) {
    Json deliveries = Json::array();
    for (const auto& d : r.deliveries) {
      Json entry{{"chain_id", d.chain_id}, {"status", d.status.ok() ? "delivered" : "failed"}};
      if (!d.status.ok()) entry["reason"] = d.status.reason;
      deliveries.push_back(std::move(entry));
    }
    out["deliveries"] = std::move(deliveries);
  }
  if (r.payload) {
    auto parsed = Json::parse(*r.payload, nullptr, false);
    out["result"] = parsed.is_discarded() ? Json(*r.payload) : std::move(parsed);
  }
  return transport::reply_body(reply_status(r), std::move(out));
}

std::optional<Transaction> to_transaction(const transport::WireMessage& request,
                                          std::string& error) {
  auto body = parse_object(request.body);
  if (!body) {
    error = "body is not a JSON object";
    return std::nullopt;
  }
  auto fields = [&](std::initializer_list<std::string_view> keys)
      -> std::optional<std::vector<Bytes>> {
    std::vector<Bytes> out;
    for (auto k : keys) {
      auto v = text(*body, k);
      if (!v) {
        error = "missing or invalid field: " + std::string(k);
        return std::nullopt;
      }
      out.push_back(std::move(*v));
    }
    return out;
  };

  switch (request.kind) {
    case MessageKind::EnrollReq: {
      auto it = body->find("record");
      if (it == body->end() || !it->is_object()) {
        error = "missing or invalid field: record";
        return std::nullopt;
      }
      return make(TxKind::Invoke, ContractId::Connector, "EnrollBlockchain", {canonical(*it)});
    }
    case MessageKind::CreateTopicReq: {
      auto args = fields({"topic_id", "name", "publisher"});
      if (!args) return std::nullopt;
      auto msg = message(*body);
      if (!msg) {
        error = "missing or invalid field: message_b64";
        return std::nullopt;
      }
      args->push_back(std::move(*msg));
      return make(TxKind::Invoke, ContractId::Topics, "CreateTopic", std::move(*args));
    }
    case MessageKind::SubscribeReq:
    case MessageKind::UnsubscribeReq: {
      auto args = fields({"topic_id", "subscriber"});
      if (!args) return std::nullopt;
      const bool sub = request.kind == MessageKind::SubscribeReq;
      return make(TxKind::Invoke, ContractId::Topics,
                  sub ? "SubscribeToTopic" : "UnsubscribeFromTopic", std::move(*args));
    }
    case MessageKind::PublishReq: {
      auto args = fields({"topic_id", "caller"});
      if (!args) return std::nullopt;
      auto msg = message(*body);
      if (!msg) {
        error = "missing or invalid field: message_b64";
        return std::nullopt;
      }
      auto tx = make(TxKind::Invoke, ContractId::Topics, "PublishToTopic",
                     {(*args)[0], std::move(*msg)});
      tx.caller = (*args)[1];
      return tx;
    }
    case MessageKind::QueryReq: return query(*body, error);
    case MessageKind::UpdateNotify:
    case MessageKind::Reply: break;
  }
  error = "kind not accepted by broker: " + std::string(to_string(request.kind));
  return std::nullopt;
}

Broker::Broker(BrokerOptions options, std::shared_ptr<transport::Transport> transport,
               const Clock& clock, Drive drive, ledger::BlockSink* sink)
    : options_(std::move(options)),
      clock_(clock),
      drive_(drive),
      ledger_(options_.capacity, contracts::make_broker_contracts(options_.contracts), sink),
      notifier_(connectors::Notifier::with_default_adapters(std::move(transport),
                                                            options_.notifier)) {
  if (drive_ == Drive::Threaded) {
    driver_.emplace(ledger_, clock_,
                    [this](std::vector<TxReceipt> r) { on_receipts(std::move(r)); });
  }
}

Broker::~Broker() { stop(); }

void Broker::start() {
  if (drive_ != Drive::Threaded) return;
  {
    std::lock_guard lock(work_mu_);
    if (!workers_.empty()) return;
    stopping_ = false;
    for (int i = 0; i < std::max(1, options_.delivery_workers); ++i) {
      workers_.emplace_back([this] { delivery_loop(); });
    }
  }
  driver_->start();
}

void Broker::stop() {
  if (driver_) driver_->stop();
  {
    std::lock_guard lock(work_mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : workers_) t.join();
  workers_.clear();
}

void Broker::restore(std::span<const ledger::Block> blocks) {
  ledger_.restore(blocks);
  std::lock_guard lock(mu_);
  for (const auto& b : blocks) {
    for (const auto& e : b.entries) {
      const auto& id = e.tx.tx_id;
      if (id.rfind("tx-", 0) != 0) continue;
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(3)));
      } catch (const std::exception&) {
      }
    }
  }
}

std::string Broker::next_tx_id() {
  std::lock_guard lock(mu_);
  return "tx-" + std::to_string(++next_id_);
}

void Broker::submit(Transaction tx, Callback done) {
  if (tx.tx_id.empty()) tx.tx_id = next_tx_id();
  {
    std::lock_guard lock(mu_);
    callbacks_[tx.tx_id] = std::move(done);
  }
  if (driver_) {
    driver_->submit(std::move(tx));
  } else {
    if (tx.submitted_at == 0) tx.submitted_at = clock_.now();
    on_receipts(ledger_.submit(std::move(tx)));
  }
}

void Broker::advance(Nanos now) {
  std::lock_guard lock(manual_mu_);
  on_receipts(ledger_.advance(now));
}

TxReceipt Broker::call(Transaction tx) {
  auto result = std::make_shared<std::promise<TxReceipt>>();
  auto future = result->get_future();
  auto done = [result](TxReceipt r) { result->set_value(std::move(r)); };
  if (drive_ == Drive::Threaded) {
    submit(std::move(tx), std::move(done));
    return future.get();
  }
  std::lock_guard lock(manual_mu_);
  submit(std::move(tx), std::move(done));
  while (future.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
    const auto next = ledger_.next_event_time();
    if (!next) throw std::logic_error("transaction never terminated");
    on_receipts(ledger_.advance(*next));
  }
  return future.get();
}

void Broker::on_receipts(std::vector<TxReceipt> receipts) {
  for (auto& r : receipts) {
    Callback done;
    {
      std::lock_guard lock(mu_);
      auto it = callbacks_.find(r.tx_id);
      if (it == callbacks_.end()) continue;
      done = std::move(it->second);
      callbacks_.erase(it);
    }
    finish(std::move(r), std::move(done));
  }
}

void Broker::finish(TxReceipt receipt, Callback done) {
  if (receipt.status != TxStatus::Committed || !has_notify(receipt)) {
    if (done) done(std::move(receipt));
    return;
  }
  if (drive_ == Drive::Threaded) {
    {
      std::lock_guard lock(work_mu_);
      work_.push_back({std::move(receipt), std::move(done)});
    }
    work_cv_.notify_one();
    return;
  }
  deliver(receipt);
  if (done) done(std::move(receipt));
}

void Broker::deliver(TxReceipt& receipt) {
  for (const auto& e : receipt.events) {
    if (e.name != contracts::kNotifyEvent) continue;
    auto d = notifier_.deliver(contracts::NotifyEvent::decode(e.payload),
                               options_.parallel_delivery);
    receipt.deliveries.insert(receipt.deliveries.end(), d.begin(), d.end());
  }
}

void Broker::delivery_loop() {
  std::unique_lock lock(work_mu_);
  while (true) {
    work_cv_.wait(lock, [this] { return stopping_ || !work_.empty(); });
    if (work_.empty()) return;
    auto item = std::move(work_.front());
    work_.pop_front();
    lock.unlock();
    deliver(item.receipt);
    if (item.done) item.done(std::move(item.receipt));
    lock.lock();
  }
}

std::string Broker::handle_request(const transport::WireMessage& request) {
  std::string error;
  auto tx = to_transaction(request, error);
  if (!tx) return transport::reply_body(status::kBadRequest, Json{{"reason", error}});
  tx->submitted_at = 0;
  return reply_for(call(std::move(*tx)));
}

}  // namespace interop::broker
