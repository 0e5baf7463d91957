#include "condgreedy/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "condgreedy/detail/text.hpp"
#include "condgreedy/io.hpp"

namespace condgreedy {

using nlohmann::json;
using detail::format_double;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string ladder_csv(const std::vector<LadderRow>& rows, const GrowthTarget& target) {
  std::string out = "m,lb,method,delta_m\n";
  for (const auto& r : rows)
    out += std::to_string(r.m) + "," + format_double(r.lb) + "," + to_string(r.method) + "," +
           format_double(target(static_cast<double>(r.m))) + "\n";
  return out;
}

std::string checks_csv(const std::vector<CheckResult>& checks) {
  std::string out = "check,verdict,detail\n";
  for (const auto& c : checks) out += csv_field(c.check) + "," + to_string(c.verdict) + "," + csv_field(c.detail) + "\n";
  return out;
}

json report_json(const ScenarioReport& report) {
  const Scenario& s = report.scenario;
  json ladder = json::array();
  for (const auto& e : report.ladder)
    ladder.push_back({{"m", e.row.m},
                      {"lb", e.row.lb},
                      {"method", to_string(e.row.method)},
                      {"delta_m", s.target(static_cast<double>(e.row.m))},
                      {"witness", witness_to_json(e.witness)}});
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"check", c.check}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
  json doc{{"scenario", s.name},
           {"basis", s.basis},
           {"target", s.target.to_string()},
           {"budget", s.budget},
           {"seed", s.seed},
           {"note", "lb values are certified lower bounds for the constants of the finite truncation"},
           {"ladder", std::move(ladder)},
           {"checks", std::move(checks)},
           {"verdict", report.pass ? "PASS" : "FAIL"}};
  if (report.growth) {
    const auto& g = *report.growth;
    doc["fit"] = {{"slope", g.slope},
                  {"intercept", g.intercept},
                  {"r2", g.r2 ? nullable(*g.r2) : json(nullptr)},
                  {"monotone", g.monotone},
                  {"doubling_constant", g.doubling},
                  {"pass", g.pass},
                  {"note", g.note}};
  }
  return doc;
}

std::string ladder_svg(const std::vector<LadderRow>& rows, const std::string& title) {
  constexpr double W = 480, H = 320, L = 56, R = 16, T = 32, B = 40;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\" viewBox=\"0 0 480 320\">\n";
  out += "<rect width=\"480\" height=\"320\" fill=\"white\"/>\n";
  out += "<text x=\"" + format_double(W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
  out += "<line x1=\"56\" y1=\"280\" x2=\"464\" y2=\"280\" stroke=\"black\"/>\n";
  out += "<line x1=\"56\" y1=\"32\" x2=\"56\" y2=\"280\" stroke=\"black\"/>\n";
  if (!rows.empty()) {
    double mmax = 1, lbmax = 0;
    for (const auto& r : rows) {
      mmax = std::max(mmax, static_cast<double>(r.m));
      lbmax = std::max(lbmax, r.lb);
    }
    if (lbmax <= 0) lbmax = 1;
    auto sx = [&](double m) { return L + (W - L - R) * m / mmax; };
    auto sy = [&](double v) { return H - B - (H - T - B) * v / lbmax; };
    std::string pts;
    for (const auto& r : rows) {
      if (!pts.empty()) pts += " ";
      pts += detail::format_sig(sx(static_cast<double>(r.m)), 6) + "," + detail::format_sig(sy(r.lb), 6);
    }
    out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"464\" y=\"296\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">m = " +
           detail::format_sig(mmax, 6) + "</text>\n";
    out += "<text x=\"52\" y=\"36\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           detail::format_sig(lbmax, 4) + "</text>\n";
  }
  out += "<text x=\"56\" y=\"296\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
  out += "</svg>\n";
  return out;
}

std::vector<std::filesystem::path> write_bundle(const ScenarioReport& report, const std::filesystem::path& dir,
                                                const BundleOptions& opts) {
  std::filesystem::create_directories(dir);
  const std::string& name = report.scenario.name;
  std::vector<LadderRow> rows;
  for (const auto& e : report.ladder) rows.push_back(e.row);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& file, const std::string& text) {
    write_file(dir / file, text);
    written.push_back(dir / file);
  };
  if (opts.csv) {
    emit(name + ".csv", ladder_csv(rows, report.scenario.target));
    emit(name + "_checks.csv", checks_csv(report.checks));
  }
  if (opts.json) emit(name + ".json", report_json(report).dump(2) + "\n");
  if (opts.svg) emit(name + ".svg", ladder_svg(rows, name));

  return written;
}

void write_manifest(const std::filesystem::path& dir, const std::vector<ScenarioReport>& reports,
                    const std::vector<std::vector<std::filesystem::path>>& files, bool timestamp) {
  json runs = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    json names = json::array();
    if (i < files.size())
      for (const auto& p : files[i]) names.push_back(p.filename().string());
    runs.push_back({{"scenario", reports[i].scenario.name},
                    {"verdict", reports[i].pass ? "PASS" : "FAIL"},
                    {"seed", reports[i].scenario.seed},
                    {"files", std::move(names)}});
  }
  json manifest{{"tool", "condgreedy"}, {"runs", std::move(runs)}};
  if (timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    manifest["timestamp"] = buf;
  }
  std::filesystem::create_directories(dir);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace condgreedy
