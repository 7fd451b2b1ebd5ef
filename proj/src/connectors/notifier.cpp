#include "interop/connectors/notifier.hpp"

#include <future>
#include <thread>

#include "interop/common/digest.hpp"

namespace interop::connectors {

using contracts::BlockchainRecord;
using ledger::DeliveryStatus;
using transport::Endpoint;
using transport::MessageKind;
using transport::TransportErrc;
using transport::TransportError;

namespace {

std::string extra_or(const BlockchainRecord& r, const std::string& key, std::string fallback) {
  auto it = r.extra.find(key);
  return it == r.extra.end() ? std::move(fallback) : it->second;
}

}  // namespace

std::string fabric_base_path(const BlockchainRecord& r) {
  return "/fabric/" + extra_or(r, "channel", "interop") + "/" + extra_or(r, "chaincode", "connector");
}

std::string besu_base_path(const BlockchainRecord& r) {
  return "/besu/" + extra_or(r, "address", "0x0");
}

std::string besu_signature(std::string_view private_key, std::string_view unsigned_body) {
  std::string material(private_key);
  material.append(unsigned_body);
  return to_hex(sha256(material));
}

Endpoint FabricAdapter::endpoint(const BlockchainRecord& r) const {
  return {r.server_ip, r.port, fabric_base_path(r)};
}

std::string FabricAdapter::build_update(const BlockchainRecord& r, std::string_view topic_id,
                                        const Bytes& message) const {
  return canonical(Json{{"channel", extra_or(r, "channel", "interop")},
                        {"chaincode", extra_or(r, "chaincode", "connector")},
                        {"fcn", "ReceiveUpdate"},
                        {"args", Json::array({topic_id, base64_encode(message)})}});
}

Endpoint BesuAdapter::endpoint(const BlockchainRecord& r) const {
  return {r.server_ip, r.port, besu_base_path(r)};
}

std::string BesuAdapter::build_update(const BlockchainRecord& r, std::string_view topic_id,
                                      const Bytes& message) const {
  Json tx{{"from", "broker"},
          {"to", extra_or(r, "address", "0x0")},
          {"abi", extra_or(r, "abi", "")},
          {"method", "receiveUpdate"},
          {"params", Json{{"topicId", topic_id}, {"message_b64", base64_encode(message)}}}};
  tx["signature"] = besu_signature(extra_or(r, "private_key", ""), canonical(tx));
  return canonical(tx);
}

Notifier::Notifier(std::shared_ptr<transport::Transport> transport, RetryPolicy policy)
    : transport_(std::move(transport)),
      policy_(policy),
      next_id_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

Notifier Notifier::with_default_adapters(std::shared_ptr<transport::Transport> transport,
                                         RetryPolicy policy) {
  Notifier n(std::move(transport), policy);
  n.register_adapter(std::string(contracts::kFabricType), std::make_shared<FabricAdapter>());
  n.register_adapter(std::string(contracts::kBesuType), std::make_shared<BesuAdapter>());
  return n;
}

void Notifier::register_adapter(std::string tag, std::shared_ptr<const NotifierAdapter> adapter) {
  adapters_.insert_or_assign(std::move(tag), std::move(adapter));
}

DeliveryStatus Notifier::dispatch(const BlockchainRecord& record, std::string_view topic_id,
                                  const Bytes& message) {
  auto it = adapters_.find(record.chain_type);
  if (it == adapters_.end()) return DeliveryStatus::failed("unsupported");
  const auto& adapter = *it->second;
  transport::WireMessage msg{MessageKind::UpdateNotify,
                             "notify-" + std::to_string(next_id_->fetch_add(1)),
                             adapter.build_update(record, topic_id, message)};
  const auto to = adapter.endpoint(record);

  std::string last_failure = "unreachable";
  for (int attempt = 0; attempt < std::max(1, policy_.attempts); ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(policy_.backoff);
    try {
      const auto reply = transport_->send(to, msg, policy_.deadline);
      const auto body = parse_object(reply.body);
      const auto s = body->at("status").get<std::string>();
      if (s == transport::status::kOk) return DeliveryStatus::delivered();
      if (s == transport::status::kError) {
        last_failure = s;
        continue;
      }
      return DeliveryStatus::failed(s);
    } catch (const TransportError& e) {
      switch (e.code()) {
        case TransportErrc::Timeout: last_failure = "timeout"; break;
        case TransportErrc::ConnectionRefused: last_failure = "connection_refused"; break;
        default: return DeliveryStatus::failed(std::string(transport::to_string(e.code())));
      }
    }
  }
  return DeliveryStatus::failed(last_failure);
}

std::vector<ledger::Delivery> Notifier::deliver(const contracts::NotifyEvent& event,
                                                bool parallel) {
  std::vector<ledger::Delivery> out(event.subscribers.size());
  auto one = [&](std::size_t i) {
    out[i].chain_id = event.subscribers[i];
    const auto& rec = event.records[i];
    out[i].status = rec ? dispatch(*rec, event.topic_id, event.message)
                        : DeliveryStatus::failed("not enrolled");
  };
  if (!parallel || out.size() < 2) {
    for (std::size_t i = 0; i < out.size(); ++i) one(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, one, i));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace interop::connectors
