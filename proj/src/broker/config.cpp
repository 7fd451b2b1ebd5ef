#include "interop/broker/config.hpp"

#include "../common/yaml_util.hpp"

namespace interop::broker {

namespace {

std::uint16_t port_of(const YAML::Node& parent, const char* key) {
  const auto n = parent[key];
  if (!n) yaml::fail(parent, std::string("missing key: ") + key);
  long value = 0;
  try {
    value = n.as<long>();
  } catch (const YAML::Exception&) {
    yaml::fail(n, "port must be an integer");
  }
  if (value < 1 || value > 65535) yaml::fail(n, "port must be in 1..65535");
  return static_cast<std::uint16_t>(value);
}

contracts::BlockchainRecord chain_of(const YAML::Node& n) {
  yaml::expect_map(n, "sample chain");
  yaml::check_keys(n, {"chain_id", "name", "type", "server_ip", "port", "role", "extra"});
  contracts::BlockchainRecord r;
  r.chain_id = yaml::require<std::string>(n, "chain_id");
  r.name = r.chain_id;
  yaml::read(n, "name", r.name);
  r.chain_type = yaml::require<std::string>(n, "type");
  r.server_ip = "127.0.0.1";
  yaml::read(n, "server_ip", r.server_ip);
  r.port = port_of(n, "port");
  if (n["role"]) {
    auto role = contracts::parse_role(yaml::require<std::string>(n, "role"));
    if (!role) yaml::fail(n["role"], "role must be publisher, subscriber or both");
    r.role = *role;
  }
  if (n["extra"]) {
    yaml::expect_map(n["extra"], "extra");
    yaml::read(n, "extra", r.extra);
  }
  return r;
}

contracts::Topic topic_of(const YAML::Node& n) {
  yaml::expect_map(n, "sample topic");
  yaml::check_keys(n, {"topic_id", "name", "publisher", "message", "subscribers"});
  contracts::Topic t;
  t.topic_id = yaml::require<std::string>(n, "topic_id");
  t.name = t.topic_id;
  yaml::read(n, "name", t.name);
  t.publisher = yaml::require<std::string>(n, "publisher");
  yaml::read(n, "message", t.message);
  yaml::read(n, "subscribers", t.subscribers);
  return t;
}

}  // namespace

BrokerConfig BrokerConfig::parse(const std::string& yaml_text) {
  const auto root = yaml::parse(yaml_text);
  yaml::check_keys(root, {"listen", "data_dir", "fsync", "capacity", "contracts", "notifier",
                          "sample"});
  BrokerConfig c;
  if (const auto listen = root["listen"]) {
    yaml::expect_map(listen, "listen");
    yaml::check_keys(listen, {"host", "port", "base_path"});
    yaml::read(listen, "host", c.listen.host);
    c.listen.port = port_of(listen, "port");
    yaml::read(listen, "base_path", c.listen.base_path);
  }
  if (root["data_dir"]) c.data_dir = yaml::require<std::string>(root, "data_dir");
  yaml::read(root, "fsync", c.fsync);
  if (const auto cap = root["capacity"]) c.capacity = yaml::capacity(cap, c.capacity);

  if (const auto k = root["contracts"]) {
    yaml::expect_map(k, "contracts");
    yaml::check_keys(k, {"max_message_bytes", "chain_types"});
    yaml::read(k, "max_message_bytes", c.contracts.max_message_bytes);
    if (const auto types = k["chain_types"]) {
      if (!types.IsSequence()) yaml::fail(types, "chain_types must be a list");
      c.contracts.chain_types.clear();
      for (const auto& t : types) {
        yaml::expect_map(t, "chain type");
        yaml::check_keys(t, {"tag", "required_extra"});
        contracts::ChainTypeSpec spec;
        spec.tag = yaml::require<std::string>(t, "tag");
        yaml::read(t, "required_extra", spec.required_extra);
        c.contracts.chain_types.push_back(std::move(spec));
      }
    }
  }

  if (const auto n = root["notifier"]) {
    yaml::expect_map(n, "notifier");
    yaml::check_keys(n, {"attempts", "backoff_ms", "deadline_ms", "parallel"});
    long backoff = c.notifier.backoff.count();
    long deadline = c.notifier.deadline.count();
    yaml::read(n, "attempts", c.notifier.attempts);
    yaml::read(n, "backoff_ms", backoff);
    yaml::read(n, "deadline_ms", deadline);
    yaml::read(n, "parallel", c.parallel_delivery);
    if (c.notifier.attempts < 1) yaml::fail(n["attempts"], "attempts must be >= 1");
    if (backoff < 0) yaml::fail(n["backoff_ms"], "backoff_ms must be >= 0");
    if (deadline <= 0) yaml::fail(n["deadline_ms"], "deadline_ms must be > 0");
    c.notifier.backoff = std::chrono::milliseconds(backoff);
    c.notifier.deadline = std::chrono::milliseconds(deadline);
  }

  if (const auto s = root["sample"]) {
    yaml::expect_map(s, "sample");
    yaml::check_keys(s, {"chains", "topics"});
    if (const auto chains = s["chains"]) {
      if (!chains.IsSequence()) yaml::fail(chains, "chains must be a list");
      for (const auto& ch : chains) c.sample.chains.push_back(chain_of(ch));
    }
    if (const auto topics = s["topics"]) {
      if (!topics.IsSequence()) yaml::fail(topics, "topics must be a list");
      for (const auto& t : topics) c.sample.topics.push_back(topic_of(t));
    }
  }
  return c;
}

BrokerConfig BrokerConfig::load(const std::filesystem::path& path) {
  return parse(yaml::read_file(path));
}

void BrokerConfig::validate() const {
  if (listen.port == 0) throw ConfigError(0, "listen.port must be in 1..65535");
  if (data_dir.empty()) throw ConfigError(0, "data_dir must be set");
  if (notifier.attempts < 1) throw ConfigError(0, "notifier.attempts must be >= 1");
  try {
    capacity.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, std::string("capacity: ") + e.what());
  }
}

std::string example_config() {
  return R"(# Broker configuration.

# Address the broker API listens on. Requests go to
# POST http://host:port/<base_path>/v1/<Kind>.
listen:
  host: 127.0.0.1
  port: 7050

# Block log and other persistent state. Created if missing; an existing
# log is replayed on startup.
data_dir: broker-data
# fsync the block log after every block.
fsync: false

# Service model of the ledger pipeline.
capacity:
  invoke_service_rate: 16        # work units per second on the invoke path
  query_service_rate: 400        # queries per second
  publish_base_cost: 1.5         # units per publish ...
  publish_per_subscriber_cost: 0.25  # ... plus this per subscriber
  overload_penalty_units: 0      # extra units charged per refused invoke
  queue_capacity: 1000           # not-yet-terminal invokes before dropping
  block_interval_ms: 100         # cut a block this long after its first tx
  max_block_size: 10             # or as soon as it holds this many

contracts:
  max_message_bytes: 65536
  # Accepted record types and the `extra` keys each must carry.
  chain_types:
    - tag: fabric
      required_extra: []
    - tag: besu
      required_extra: [abi, address, private_key]

# Delivery of publish notifications to subscriber networks.
notifier:
  attempts: 3
  backoff_ms: 50
  deadline_ms: 2000
  parallel: true

# Written once by InitLedger when the ledger is empty.
sample:
  chains:
    - chain_id: fabric-pub
      name: Fabric publisher
      type: fabric
      server_ip: 127.0.0.1
      port: 7101
      role: publisher
      extra: {channel: interop, chaincode: connector}
  topics:
    - topic_id: welcome
      name: Welcome topic
      publisher: fabric-pub
      message: hello
)";
}

}  // namespace interop::broker
