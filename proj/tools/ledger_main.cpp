#include <CLI11.hpp>

#include <iostream>

#include "interop/ledger/block_log.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Block log inspection"};
  app.require_subcommand(1);

  std::string log_path;
  bool verify_only = false;
  auto* dump = app.add_subcommand("dump", "Print a block log as JSON lines");
  dump->add_option("log", log_path, "Block log file")->required();
  dump->add_flag("--verify", verify_only, "Only check the log; print its height");

  CLI11_PARSE(app, argc, argv);
  try {
    const auto loaded = interop::ledger::BlockLog::read(log_path);
    if (verify_only) {
      std::cout << "height " << loaded.blocks.size() << "\n";
    } else {
      interop::ledger::write_json_lines(loaded, std::cout);
    }
    if (loaded.torn_bytes > 0) std::cerr << "torn tail: " << loaded.torn_bytes << " bytes\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
