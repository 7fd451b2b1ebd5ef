#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "interop/bench/emit.hpp"
#include "interop/bench/harness.hpp"

using namespace interop;

int main(int argc, char** argv) {
  CLI::App app{"Fixed-rate benchmark driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, target, url;
  std::uint64_t seed = 0;
  std::vector<std::string> formats{"json", "csv", "svg"};
  auto* run = app.add_subcommand("run", "Run every experiment in a config");
  run->add_option("--config", config_path, "Benchmark YAML config")->required();
  run->add_option("--out", out_dir, "Report directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the run seed");
  run->add_option("--target", target, "inproc or url")->check(CLI::IsMember({"inproc", "url"}));
  run->add_option("--url", url, "Broker URL for --target url");
  run->add_option("--format", formats, "Output formats")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "svg"}));

  CLI11_PARSE(app, argc, argv);
  try {
    auto config = bench::BenchConfig::load(config_path);
    if (*seed_opt) config.reseed(seed);
    if (target == "inproc") config.target = bench::TargetKind::Inproc;
    if (target == "url") config.target = bench::TargetKind::Url;
    if (!url.empty()) {
      auto ep = bench::parse_url(url);
      if (!ep) throw std::runtime_error("bad --url: " + url);
      config.url = *ep;
    }

    const auto report = bench::run(config);
    std::vector<bench::Format> fs;
    for (const auto& f : formats) {
      fs.push_back(f == "json" ? bench::Format::Json
                               : f == "csv" ? bench::Format::Csv : bench::Format::Svg);
    }
    bench::emit(report, fs, out_dir);

    for (const auto& e : report.experiments) {
      std::cout << e.name << " (" << to_string(e.operation) << ")\n";
      std::cout << "  rate     tput   lat_avg_ms   lat_max_ms  success%\n";
      for (const auto& r : e.rounds) {
        std::cout << fmt::format("  {:6.1f} {:7.2f} {:12.1f} {:12.1f} {:9.1f}\n", r.send_rate,
                                 r.throughput, r.latency_avg_ms, r.latency_max_ms,
                                 r.success_rate);
      }
      if (!e.complete) std::cout << "  incomplete: " << e.error << "\n";
    }
    std::cout << "report written to " << out_dir << "\n";
    return report.incomplete ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
