#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "interop/bench/harness.hpp"
#include "interop/common/json.hpp"

namespace interop::bench {

enum class Format { Json, Csv, Svg };

Json report_json(const BenchReport& report);
std::string report_csv(const BenchReport& report);
/// Four stacked panels over the round start times: send rate, throughput,
/// average latency and success rate, one series each.
std::string report_svg(const ExperimentReport& experiment);

/// Writes report.json, report.csv and <experiment>.svg into `dir`
/// (created if missing). Returns the paths written. Throws
/// std::runtime_error when a file cannot be written.
std::vector<std::filesystem::path> emit(const BenchReport& report,
                                        const std::vector<Format>& formats,
                                        const std::filesystem::path& dir);

}  // namespace interop::bench
