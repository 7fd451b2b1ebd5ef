#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include "interop/broker/service.hpp"
#include "interop/contracts/records.hpp"
#include "interop/contracts/topics_contract.hpp"

using namespace interop;

namespace {

int serve(const std::string& config_path) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  broker::BrokerService service(broker::BrokerConfig::load(config_path));
  service.start();
  const auto& c = service.config();
  std::cout << "broker listening on http://" << c.listen.host << ":" << c.listen.port
            << c.listen.base_path << " (height " << service.broker().ledger().height() << ", log "
            << service.log_path().string() << ")" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  std::cout << "stopping" << std::endl;
  service.stop();
  return 0;
}

int dump(const std::string& config_path, std::string log_path, bool with_state) {
  broker::BrokerConfig config;
  if (!config_path.empty()) config = broker::BrokerConfig::load(config_path);
  if (log_path.empty()) log_path = (config.data_dir / broker::kBlockLogName).string();
  const auto loaded = ledger::BlockLog::read(log_path);
  ledger::write_json_lines(loaded, std::cout);
  if (loaded.torn_bytes > 0) std::cerr << "torn tail: " << loaded.torn_bytes << " bytes\n";
  if (with_state) {
    ledger::Ledger replay(config.capacity, contracts::make_broker_contracts(config.contracts));
    replay.restore(loaded.blocks);
    const auto state = replay.state();
    Json entries = Json::object();
    for (const auto& [k, v] : state.entries()) {
      auto parsed = Json::parse(v, nullptr, false);
      entries[k] = parsed.is_discarded() ? Json(base64_encode(v)) : parsed;
    }
    std::cout << canonical(Json{{"height", replay.height()},
                                {"state_digest", to_hex(state.digest())},
                                {"state", entries}})
              << "\n";
  }
  return 0;
}

int init_sample(const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << broker::example_config();
    return 0;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << broker::example_config();
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic broker ledger"};
  app.require_subcommand(1);

  std::string config_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the broker");
  serve_cmd->add_option("--config", config_path, "Broker YAML config")->required();

  std::string dump_config, dump_log;
  bool with_state = false;
  auto* dump_cmd = app.add_subcommand("dump-ledger", "Print the block log as JSON lines");
  dump_cmd->add_option("--config", dump_config, "Broker YAML config (locates data_dir)");
  dump_cmd->add_option("--log", dump_log, "Block log file");
  dump_cmd->add_flag("--state", with_state, "Replay and print the world state");

  std::string sample_out;
  auto* sample_cmd = app.add_subcommand("init-sample", "Write a commented example config");
  sample_cmd->add_option("--out", sample_out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(config_path);
    if (*dump_cmd) {
      if (dump_config.empty() && dump_log.empty()) {
        std::cerr << "dump-ledger needs --config or --log\n";
        return 2;
      }
      return dump(dump_config, dump_log, with_state);
    }
    if (*sample_cmd) return init_sample(sample_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
