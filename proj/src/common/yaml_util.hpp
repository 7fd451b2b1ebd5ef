#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "interop/common/config_error.hpp"
#include "interop/ledger/capacity_model.hpp"

namespace interop::yaml {

inline int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

[[noreturn]] inline void fail(const YAML::Node& n, const std::string& what) {
  throw ConfigError(line_of(n), what);
}

inline YAML::Node parse(const std::string& text) {
  try {
    auto root = YAML::Load(text);
    if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) fail(root, "top level must be a mapping");
    return root;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, e.msg);
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void expect_map(const YAML::Node& n, std::string_view what) {
  if (!n.IsMap()) fail(n, std::string(what) + " must be a mapping");
}

inline void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(kv.first, "unknown key: " + key);
  }
}

/// Reads `parent[key]` into `out` when present.
template <class T>
void read(const YAML::Node& parent, const char* key, T& out) {
  const auto n = parent[key];
  if (!n) return;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, std::string("invalid value for ") + key);
  }
}

template <class T>
T require(const YAML::Node& parent, const char* key) {
  if (!parent[key]) fail(parent, std::string("missing key: ") + key);
  T out{};
  read(parent, key, out);
  return out;
}

inline ledger::CapacityModel capacity(const YAML::Node& n, ledger::CapacityModel m) {
  expect_map(n, "capacity");
  check_keys(n, {"invoke_service_rate", "query_service_rate", "publish_base_cost",
                 "publish_per_subscriber_cost", "overload_penalty_units", "queue_capacity",
                 "block_interval_ms", "max_block_size"});
  read(n, "invoke_service_rate", m.invoke_service_rate);
  read(n, "query_service_rate", m.query_service_rate);
  read(n, "publish_base_cost", m.publish_base_cost);
  read(n, "publish_per_subscriber_cost", m.publish_per_subscriber_cost);
  read(n, "overload_penalty_units", m.overload_penalty_units);
  read(n, "queue_capacity", m.queue_capacity);
  read(n, "block_interval_ms", m.block_interval_ms);
  read(n, "max_block_size", m.max_block_size);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    fail(n, e.what());
  }
  return m;
}

}  // namespace interop::yaml
