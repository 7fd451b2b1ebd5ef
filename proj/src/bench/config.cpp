#include "interop/bench/config.hpp"

#include "../common/yaml_util.hpp"
#include "interop/common/digest.hpp"

namespace interop::bench {

namespace {

Json capacity_json(const ledger::CapacityModel& m) {
  return Json{{"invoke_service_rate", m.invoke_service_rate},
              {"query_service_rate", m.query_service_rate},
              {"publish_base_cost", m.publish_base_cost},
              {"publish_per_subscriber_cost", m.publish_per_subscriber_cost},
              {"overload_penalty_units", m.overload_penalty_units},
              {"queue_capacity", m.queue_capacity},
              {"block_interval_ms", m.block_interval_ms},
              {"max_block_size", m.max_block_size}};
}

RoundSpec round_of(const YAML::Node& n, RoundSpec base) {
  yaml::expect_map(n, "round");
  yaml::check_keys(n, {"send_rate", "duration_s", "workers"});
  yaml::read(n, "send_rate", base.send_rate);
  yaml::read(n, "duration_s", base.duration_s);
  yaml::read(n, "workers", base.workers);
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    yaml::fail(n, e.what());
  }
  return base;
}

Experiment experiment_of(const YAML::Node& n, const BenchConfig& c, std::size_t index) {
  yaml::expect_map(n, "experiment");
  yaml::check_keys(n, {"name", "workload", "capacity", "rounds", "rates", "duration_s",
                       "workers"});
  Experiment e;
  e.name = yaml::require<std::string>(n, "name");
  if (e.name.empty() || e.name.find_first_of("/\\ ") != std::string::npos) {
    yaml::fail(n["name"], "name must be non-empty without spaces or slashes");
  }
  e.workload.seed = c.seed + index;

  const auto w = n["workload"];
  if (!w) yaml::fail(n, "missing key: workload");
  yaml::expect_map(w, "workload");
  yaml::check_keys(w, {"operation", "seed", "fanout", "topics", "subscribers", "message_bytes"});
  const auto op = parse_operation(yaml::require<std::string>(w, "operation"));
  if (!op) yaml::fail(w["operation"], "unknown operation");
  e.workload.operation = *op;
  e.explicit_seed = static_cast<bool>(w["seed"]);
  yaml::read(w, "seed", e.workload.seed);
  yaml::read(w, "fanout", e.workload.fanout);
  yaml::read(w, "topics", e.workload.topics);
  yaml::read(w, "subscribers", e.workload.subscribers);
  yaml::read(w, "message_bytes", e.workload.message_bytes);
  if (e.workload.topics == 0) yaml::fail(w["topics"], "topics must be >= 1");

  if (const auto cap = n["capacity"]) e.capacity = yaml::capacity(cap, c.capacity);

  RoundSpec shared;
  yaml::read(n, "duration_s", shared.duration_s);
  yaml::read(n, "workers", shared.workers);
  if (const auto rates = n["rates"]) {
    if (!rates.IsSequence()) yaml::fail(rates, "rates must be a list");
    for (const auto& r : rates) {
      RoundSpec spec = shared;
      try {
        spec.send_rate = r.as<double>();
        spec.validate();
      } catch (const YAML::Exception&) {
        yaml::fail(r, "rate must be a number");
      } catch (const std::invalid_argument& ex) {
        yaml::fail(r, ex.what());
      }
      e.rounds.push_back(spec);
    }
  }
  if (const auto rounds = n["rounds"]) {
    if (!rounds.IsSequence()) yaml::fail(rounds, "rounds must be a list");
    for (const auto& r : rounds) e.rounds.push_back(round_of(r, shared));
  }
  if (e.rounds.empty()) yaml::fail(n, "experiment needs rounds or rates");
  return e;
}

}  // namespace

std::optional<transport::Endpoint> parse_url(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) return std::nullopt;
  url.remove_prefix(scheme.size());
  const auto slash = url.find('/');
  const auto authority = url.substr(0, slash);
  std::string base = slash == std::string_view::npos ? "" : std::string(url.substr(slash));
  while (!base.empty() && base.back() == '/') base.pop_back();
  const auto colon = authority.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(std::string(authority.substr(colon + 1)), &used);
    if (used != authority.size() - colon - 1) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (port < 1 || port > 65535) return std::nullopt;
  return transport::Endpoint{std::string(authority.substr(0, colon)),
                             static_cast<std::uint16_t>(port), base};
}

BenchConfig BenchConfig::parse(const std::string& yaml_text) {
  const auto root = yaml::parse(yaml_text);
  yaml::check_keys(root, {"schema", "seed", "target", "url", "stub_base_port", "drain_timeout_s",
                          "capacity", "experiments"});
  BenchConfig c;
  int schema = kConfigSchema;
  yaml::read(root, "schema", schema);
  if (schema != kConfigSchema) yaml::fail(root["schema"], "unsupported schema version");
  yaml::read(root, "seed", c.seed);
  if (root["target"]) {
    const auto t = yaml::require<std::string>(root, "target");
    if (t == "inproc") {
      c.target = TargetKind::Inproc;
    } else if (t == "url") {
      c.target = TargetKind::Url;
    } else {
      yaml::fail(root["target"], "target must be inproc or url");
    }
  }
  if (root["url"]) {
    auto ep = parse_url(yaml::require<std::string>(root, "url"));
    if (!ep) yaml::fail(root["url"], "url must look like http://host:port");
    c.url = *ep;
  }
  yaml::read(root, "stub_base_port", c.stub_base_port);
  yaml::read(root, "drain_timeout_s", c.drain_timeout_s);
  if (!(c.drain_timeout_s > 0.0)) yaml::fail(root["drain_timeout_s"], "must be > 0");
  if (const auto cap = root["capacity"]) c.capacity = yaml::capacity(cap, c.capacity);

  const auto exps = root["experiments"];
  if (!exps || !exps.IsSequence() || exps.size() == 0) {
    yaml::fail(exps ? exps : root, "experiments must be a non-empty list");
  }
  for (std::size_t i = 0; i < exps.size(); ++i) {
    c.experiments.push_back(experiment_of(exps[i], c, i));
    for (std::size_t j = 0; j < i; ++j) {
      if (c.experiments[j].name == c.experiments[i].name) {
        yaml::fail(exps[i]["name"], "duplicate experiment name");
      }
    }
  }
  return c;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  return parse(yaml::read_file(path));
}

void BenchConfig::reseed(std::uint64_t s) {
  seed = s;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    if (!experiments[i].explicit_seed) experiments[i].workload.seed = seed + i;
  }
}

Json BenchConfig::to_json() const {
  Json exps = Json::array();
  for (const auto& e : experiments) {
    Json rounds = Json::array();
    for (const auto& r : e.rounds) {
      rounds.push_back(
          {{"send_rate", r.send_rate}, {"duration_s", r.duration_s}, {"workers", r.workers}});
    }
    exps.push_back({{"name", e.name},
                    {"workload",
                     {{"operation", to_string(e.workload.operation)},
                      {"seed", e.workload.seed},
                      {"fanout", e.workload.fanout},
                      {"topics", e.workload.topics},
                      {"subscribers", e.workload.subscribers},
                      {"message_bytes", e.workload.message_bytes}}},
                    {"capacity", e.capacity ? capacity_json(*e.capacity) : Json(nullptr)},
                    {"rounds", std::move(rounds)}});
  }
  return Json{{"schema", kConfigSchema},
              {"seed", seed},
              {"target", target == TargetKind::Inproc ? "inproc" : "url"},
              {"drain_timeout_s", drain_timeout_s},
              {"capacity", capacity_json(capacity)},
              {"experiments", std::move(exps)}};
}

std::string BenchConfig::digest() const { return to_hex(sha256(canonical(to_json()))); }

}  // namespace interop::bench
