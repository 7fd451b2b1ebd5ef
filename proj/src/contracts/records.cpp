#include "interop/contracts/records.hpp"

#include "interop/ledger/context.hpp"

namespace interop::contracts {

using ledger::ContractError;
using ledger::RejectCode;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ContractError(RejectCode::BadRequest, what); }

std::string require_string(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) bad(std::string("missing or non-string field: ") + field);
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Publisher: return "publisher";
    case Role::Subscriber: return "subscriber";
    case Role::Both: return "both";
  }
  return "both";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "publisher") return Role::Publisher;
  if (text == "subscriber") return Role::Subscriber;
  if (text == "both") return Role::Both;
  return std::nullopt;
}

Json BlockchainRecord::to_json() const {
  return Json{{"chain_id", chain_id}, {"name", name},   {"chain_type", chain_type},
              {"server_ip", server_ip}, {"port", port}, {"extra", extra},
              {"role", to_string(role)}};
}

BlockchainRecord BlockchainRecord::from_json(const Json& j) {
  if (!j.is_object()) bad("blockchain record must be an object");
  BlockchainRecord r;
  r.chain_id = require_string(j, "chain_id");
  r.name = require_string(j, "name");
  r.chain_type = require_string(j, "chain_type");
  r.server_ip = require_string(j, "server_ip");
  auto port = j.find("port");
  if (port == j.end() || !port->is_number_integer()) bad("missing or non-integer field: port");
  const auto p = port->get<std::int64_t>();
  if (p < 1 || p > 65535) bad("invalid port");
  r.port = static_cast<std::uint16_t>(p);
  if (auto extra = j.find("extra"); extra != j.end()) {
    if (!extra->is_object()) bad("extra must be an object");
    for (const auto& [k, v] : extra->items()) {
      if (!v.is_string()) bad("extra values must be strings");
      r.extra.emplace(k, v.get<std::string>());
    }
  }
  auto role = parse_role(require_string(j, "role"));
  if (!role) bad("invalid role");
  r.role = *role;
  return r;
}

Json Topic::to_json() const {
  return Json{{"topic_id", topic_id},
              {"name", name},
              {"publisher", publisher},
              {"subscribers", subscribers},
              {"message_b64", base64_encode(message)}};
}

Topic Topic::from_json(const Json& j) {
  if (!j.is_object()) bad("topic must be an object");
  Topic t;
  t.topic_id = require_string(j, "topic_id");
  t.name = require_string(j, "name");
  t.publisher = require_string(j, "publisher");
  if (auto subs = j.find("subscribers"); subs != j.end()) {
    if (!subs->is_array()) bad("subscribers must be an array");
    for (const auto& s : *subs) {
      if (!s.is_string()) bad("subscribers must be strings");
      t.subscribers.push_back(s.get<std::string>());
    }
  }
  auto msg = base64_decode(require_string(j, "message_b64"));
  if (!msg) bad("message_b64 is not valid base64");
  t.message = std::move(*msg);
  return t;
}

const ChainTypeSpec* ContractOptions::find_type(std::string_view tag) const {
  for (const auto& t : chain_types) {
    if (t.tag == tag) return &t;
  }
  return nullptr;
}

Bytes encode_chain_samples(const SampleSet& samples) {
  Json chains = Json::array();
  for (const auto& c : samples.chains) chains.push_back(c.to_json());
  return canonical(Json{{"chains", std::move(chains)}});
}

Bytes encode_topic_samples(const SampleSet& samples) {
  Json topics = Json::array();
  for (const auto& t : samples.topics) topics.push_back(t.to_json());
  return canonical(Json{{"topics", std::move(topics)}});
}

std::string topic_key(std::string_view topic_id) {
  return std::string(kTopicPrefix).append(topic_id);
}

std::string chain_key(std::string_view chain_id) {
  return std::string(kChainPrefix).append(chain_id);
}

}  // namespace interop::contracts
