#include "interop/bench/emit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <system_error>

namespace interop::bench {

namespace {

double rounded(double v) { return std::round(v * 1000.0) / 1000.0; }

Json row_json(const RoundRow& r) {
  return Json{{"round", r.index},
              {"start_s", rounded(r.start_s)},
              {"send_rate", rounded(r.send_rate)},
              {"duration_s", rounded(r.duration_s)},
              {"workers", r.workers},
              {"submitted", r.submitted},
              {"committed", r.committed},
              {"rejected", r.rejected},
              {"dropped", r.dropped},
              {"pending", r.pending},
              {"offered_rate", rounded(r.offered_rate)},
              {"throughput", rounded(r.throughput)},
              {"latency_ms", {{"min", rounded(r.latency_min_ms)},
                              {"avg", rounded(r.latency_avg_ms)},
                              {"max", rounded(r.latency_max_ms)}}},
              {"success_rate", rounded(r.success_rate)}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

struct Panel {
  std::string title;
  std::string unit;
  double RoundRow::*field;
};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Json report_json(const BenchReport& report) {
  Json exps = Json::array();
  for (const auto& e : report.experiments) {
    Json rounds = Json::array();
    for (const auto& r : e.rounds) rounds.push_back(row_json(r));
    Json entry{{"name", e.name},
               {"operation", to_string(e.operation)},
               {"fanout", e.fanout},
               {"complete", e.complete},
               {"rounds", std::move(rounds)}};
    if (!e.error.empty()) entry["error"] = e.error;
    exps.push_back(std::move(entry));
  }
  return Json{{"schema", kReportSchema},
              {"metadata",
               {{"seed", report.seed},
                {"config_digest", report.config_digest},
                {"target", report.target},
                {"incomplete", report.incomplete},
                {"latency_excludes", "dropped"},
                {"throughput", "committed / max(duration, last_finish - first_send)"},
                {"success_rate", "committed / (submitted - pending)"}}},
              {"experiments", std::move(exps)}};
}

std::string report_csv(const BenchReport& report) {
  std::string out =
      "experiment,operation,fanout,round,start_s,send_rate,duration_s,workers,submitted,"
      "committed,rejected,dropped,pending,offered_rate,throughput,latency_min_ms,"
      "latency_avg_ms,latency_max_ms,success_rate\n";
  for (const auto& e : report.experiments) {
    for (const auto& r : e.rounds) {
      out += fmt::format(
          "{},{},{},{},{:.3f},{:.3f},{:.3f},{},{},{},{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},"
          "{:.3f}\n",
          e.name, to_string(e.operation), e.fanout, r.index, r.start_s, r.send_rate,
          r.duration_s, r.workers, r.submitted, r.committed, r.rejected, r.dropped, r.pending,
          r.offered_rate, r.throughput, r.latency_min_ms, r.latency_avg_ms, r.latency_max_ms,
          r.success_rate);
    }
  }
  return out;
}

std::string report_svg(const ExperimentReport& e) {
  const Panel panels[] = {
      {"send rate", "TPS", &RoundRow::send_rate},
      {"throughput", "TPS", &RoundRow::throughput},
      {"avg latency", "ms", &RoundRow::latency_avg_ms},
      {"success rate", "%", &RoundRow::success_rate},
  };
  constexpr double kWidth = 640, kPanelH = 150, kLeft = 70, kRight = 20, kTop = 30, kGap = 40;
  const double height = kTop + 4 * (kPanelH + kGap);
  double t_max = 0.0;
  for (const auto& r : e.rounds) t_max = std::max(t_max, r.start_s + r.duration_s);
  if (t_max <= 0.0) t_max = 1.0;
  const double plot_w = kWidth - kLeft - kRight;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, height);
  out += fmt::format("<text x=\"{:.0f}\" y=\"18\" font-size=\"14\">{} ({})</text>\n", kLeft,
                     xml_escape(e.name), to_string(e.operation));
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& panel = panels[p];
    const double y0 = kTop + static_cast<double>(p) * (kPanelH + kGap) + 15;
    double v_max = 0.0;
    for (const auto& r : e.rounds) v_max = std::max(v_max, r.*panel.field);
    if (v_max <= 0.0) v_max = 1.0;
    v_max *= 1.1;
    out += fmt::format("<g class=\"panel\" data-metric=\"{}\">\n", panel.title);
    out += fmt::format("<text x=\"{:.0f}\" y=\"{:.1f}\">{} ({})</text>\n", kLeft, y0 - 4,
                       panel.title, panel.unit);
    out += fmt::format(
        "<rect x=\"{:.0f}\" y=\"{:.1f}\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"none\" "
        "stroke=\"#999\"/>\n",
        kLeft, y0, plot_w, kPanelH);
    out += fmt::format("<text x=\"{:.0f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n",
                       kLeft - 4, y0 + 10, v_max);
    out += fmt::format("<text x=\"{:.0f}\" y=\"{:.1f}\" text-anchor=\"end\">0</text>\n",
                       kLeft - 4, y0 + kPanelH);
    std::string points;
    for (const auto& r : e.rounds) {
      const double v = r.*panel.field;
      const double y = y0 + kPanelH * (1.0 - v / v_max);
      const double xa = kLeft + plot_w * r.start_s / t_max;
      const double xb = kLeft + plot_w * (r.start_s + r.duration_s) / t_max;
      points += fmt::format("{:.1f},{:.1f} {:.1f},{:.1f} ", xa, y, xb, y);
    }
    if (!points.empty()) points.pop_back();
    out += fmt::format(
        "<polyline class=\"series\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
        "points=\"{}\"/>\n",
        points);
    out += "</g>\n";
  }
  out += fmt::format("<text x=\"{:.0f}\" y=\"{:.0f}\">time (s), 0 to {:.1f}</text>\n", kLeft,
                     height - 8, t_max);
  out += "</svg>\n";
  return out;
}

std::vector<std::filesystem::path> emit(const BenchReport& report,
                                        const std::vector<Format>& formats,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (auto f : formats) {
    switch (f) {
      case Format::Json:
        write_file(dir / "report.json", report_json(report).dump(2) + "\n");
        written.push_back(dir / "report.json");
        break;
      case Format::Csv:
        write_file(dir / "report.csv", report_csv(report));
        written.push_back(dir / "report.csv");
        break;
      case Format::Svg:
        for (const auto& e : report.experiments) {
          const auto path = dir / (e.name + ".svg");
          write_file(path, report_svg(e));
          written.push_back(path);
        }
        break;
    }
  }
  return written;
}

}  // namespace interop::bench
