#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interop/common/bytes.hpp"
#include "interop/common/json.hpp"

namespace interop::contracts {

inline constexpr std::string_view kTopicPrefix = "topic:";
inline constexpr std::string_view kChainPrefix = "chain:";
inline constexpr std::string_view kTopicsMarker = "meta:topics";
inline constexpr std::string_view kConnectorMarker = "meta:connector";

inline constexpr std::string_view kFabricType = "fabric";
inline constexpr std::string_view kBesuType = "besu";

enum class Role { Publisher, Subscriber, Both };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

inline bool can_publish(Role r) { return r == Role::Publisher || r == Role::Both; }
inline bool can_subscribe(Role r) { return r == Role::Subscriber || r == Role::Both; }

/// Connection descriptor of an enrolled remote network.
struct BlockchainRecord {
  std::string chain_id;
  std::string name;
  std::string chain_type;
  std::string server_ip;
  std::uint16_t port = 0;
  std::map<std::string, std::string> extra;
  Role role = Role::Both;

  Json to_json() const;
  /// Throws ledger::ContractError(BadRequest) on a malformed document.
  static BlockchainRecord from_json(const Json& j);

  bool operator==(const BlockchainRecord&) const = default;
};

struct Topic {
  std::string topic_id;
  std::string name;
  std::string publisher;
  std::vector<std::string> subscribers;
  Bytes message;

  Json to_json() const;
  static Topic from_json(const Json& j);

  bool operator==(const Topic&) const = default;
};

/// Chain type tag accepted by the connector, with the `extra` keys it needs.
struct ChainTypeSpec {
  std::string tag;
  std::vector<std::string> required_extra;
};

struct ContractOptions {
  std::vector<ChainTypeSpec> chain_types{
      {std::string(kFabricType), {}},
      {std::string(kBesuType), {"abi", "address", "private_key"}},
  };
  std::size_t max_message_bytes = 64 * 1024;

  const ChainTypeSpec* find_type(std::string_view tag) const;
};

/// Records written by InitLedger. Passed as the transaction argument so
/// replays stay deterministic.
struct SampleSet {
  std::vector<BlockchainRecord> chains;
  std::vector<Topic> topics;
};

Bytes encode_chain_samples(const SampleSet& samples);
Bytes encode_topic_samples(const SampleSet& samples);

std::string topic_key(std::string_view topic_id);
std::string chain_key(std::string_view chain_id);

}  // namespace interop::contracts
