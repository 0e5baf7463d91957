#include "condgreedy/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "condgreedy/basis_spec.hpp"
#include "condgreedy/conditionality.hpp"
#include "condgreedy/detail/text.hpp"
#include "condgreedy/greedy.hpp"
#include "condgreedy/io.hpp"
#include "condgreedy/report.hpp"
#include "condgreedy/scenarios.hpp"

namespace condgreedy {

namespace {

using nlohmann::json;
using detail::format_double;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes to `path`, or to `out` when path is "-" or empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

struct Common {
  std::string basis;
  std::string out = "-";
  std::string seed = "0xC0FFEE";
  std::uint64_t budget = 32;
  std::string format = "csv";
};

std::string constants_table(const Common& c, const std::string& kind, const std::string& m_range, bool oracle,
                            const std::string& target_text) {
  const BasisTruncation b = load_basis(c.basis);
  const auto ms = parse_range(m_range);
  const GrowthTarget target = GrowthTarget::parse(target_text);
  const std::uint64_t seed = parse_seed(c.seed);
  std::vector<LadderRow> rows;
  std::vector<Witness> witnesses;
  if (kind == "L") {
    Scenario s{"constants", c.basis, ms, target, {}, c.budget, seed, oracle};
    for (const auto& e : run(s).ladder) {
      rows.push_back(e.row);
      witnesses.push_back(e.witness);
    }
  } else {
    std::optional<Witness> previous;
    for (Index m : ms) {
      Estimate e = k_m_estimate(b, m, c.budget, seed);
      if (previous && previous->ratio > e.value) e = {previous->ratio, *previous};
      previous = e.witness;
      rows.push_back({m, e.value, e.witness.method});
      witnesses.push_back(e.witness);
    }
  }
  if (c.format == "json") {
    json doc{{"basis", b.label()}, {"kind", kind}, {"target", target.to_string()}, {"ladder", json::array()}};
    for (std::size_t i = 0; i < rows.size(); ++i)
      doc["ladder"].push_back({{"m", rows[i].m},
                               {"lb", rows[i].lb},
                               {"method", to_string(rows[i].method)},
                               {"delta_m", target(static_cast<double>(rows[i].m))},
                               {"witness", witness_to_json(witnesses[i])}});
    if (rows.size() >= 4) {
      const GrowthReport g = growth_fit(rows, target);
      doc["fit"] = {{"slope", g.slope}, {"intercept", g.intercept}, {"r2", g.r2 ? json(*g.r2) : json(nullptr)},
                    {"pass", g.pass}, {"note", g.note}};
    }
    return doc.dump(2) + "\n";
  }
  if (c.format != "csv") throw UsageError("constants: --format must be csv or json");
  return ladder_csv(rows, target);
}

std::string greedy_table(const Common& c, const std::string& m_range, bool exact) {
  const BasisTruncation b = load_basis(c.basis);
  const std::uint64_t seed = parse_seed(c.seed);
  const Estimate qg = quasi_greedy_constant_lb(b, c.budget, seed);
  const Estimate ag = almost_greedy_constant_lb(b, c.budget, seed);
  const PhiMode mode = exact ? PhiMode::Exact : PhiMode::Search;
  std::vector<Index> ms;
  if (!m_range.empty()) ms = parse_range(m_range);
  std::vector<std::pair<double, double>> phi;
  for (Index m : ms)
    phi.emplace_back(fundamental_function(b, m, mode, c.budget, seed), democracy_ratio(b, m, mode, c.budget, seed));
  if (c.format == "json") {
    json doc{{"basis", b.label()},
             {"quasi_greedy", {{"lb", qg.value}, {"witness", witness_to_json(qg.witness)}}},
             {"almost_greedy", {{"lb", std::isfinite(ag.value) ? json(ag.value) : json(nullptr)},
                                {"witness", witness_to_json(ag.witness)}}},
             {"fundamental", json::array()}};
    for (std::size_t i = 0; i < ms.size(); ++i)
      doc["fundamental"].push_back({{"m", ms[i]}, {"phi", phi[i].first}, {"democracy", phi[i].second}});
    return doc.dump(2) + "\n";
  }
  if (c.format != "csv") throw UsageError("greedy-check: --format must be csv or json");
  std::string out = "quantity,m,value\n";
  out += "quasi_greedy,," + format_double(qg.value) + "\n";
  out += "almost_greedy,," + (std::isfinite(ag.value) ? format_double(ag.value) : std::string("inf")) + "\n";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    out += "phi," + std::to_string(ms[i]) + "," + format_double(phi[i].first) + "\n";
    out += "democracy," + std::to_string(ms[i]) + "," + format_double(phi[i].second) + "\n";
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string list_scenarios() {
  std::string out = "name,basis,ladder,target,checks\n";
  for (const auto& s : builtin_scenarios()) {
    std::vector<std::string> ladder;
    for (Index m : s.ladder) ladder.push_back(std::to_string(m));
    out += s.name + ",\"" + s.basis + "\"," + join(ladder, " ") + "," + s.target.to_string() + "," + join(s.checks, " ") + "\n";
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditionality and greedy constants of finite basis truncations", "condgreedy"};
  app.require_subcommand(1);

  Common construct_opts;
  auto* construct = app.add_subcommand("construct", "Print a basis truncation as a JSON document");
  construct->add_option("--basis", construct_opts.basis, "Basis spec, or @file.json")->required();
  construct->add_option("--out", construct_opts.out, "Output file, - for stdout");

  Common constants_opts;
  std::string kind = "L", m_range, target = "log";
  bool oracle = false;
  auto* constants = app.add_subcommand("constants", "Lower bounds for L_m or k_m over an m-ladder");
  constants->add_option("--basis", constants_opts.basis, "Basis spec, or @file.json")->required();
  constants->add_option("--kind", kind, "L or k")->check(CLI::IsMember({"L", "k"}));
  constants->add_option("--m", m_range, "m ladder, e.g. 2..10 or 2^2..2^6")->required();
  constants->add_flag("--oracle", oracle, "Exact sign-grid oracle for rungs m <= 12 (L only)");
  constants->add_option("--target", target, "Growth target for delta_m: log, linear, power:a");
  constants->add_option("--budget", constants_opts.budget, "Random samples per rung");
  constants->add_option("--seed", constants_opts.seed, "Seed (decimal or 0x hex)");
  constants->add_option("--format", constants_opts.format, "csv or json");
  constants->add_option("--out", constants_opts.out, "Output file, - for stdout");

  Common greedy_opts;
  greedy_opts.format = "csv";
  std::string phi_range;
  bool exact = false;
  auto* greedy = app.add_subcommand("greedy-check", "Quasi-greedy, almost-greedy and democracy estimates");
  greedy->add_option("--basis", greedy_opts.basis, "Basis spec, or @file.json")->required();
  greedy->add_option("--m", phi_range, "m values for the fundamental function");
  greedy->add_flag("--exact", exact, "Exact enumeration for the fundamental function (d <= 20)");
  greedy->add_option("--budget", greedy_opts.budget, "Random samples");
  greedy->add_option("--seed", greedy_opts.seed, "Seed (decimal or 0x hex)");
  greedy->add_option("--format", greedy_opts.format, "csv or json");
  greedy->add_option("--out", greedy_opts.out, "Output file, - for stdout");

  std::string scenario_name, config, out_dir = "reports", formats = "csv,json,svg", exp_seed;
  std::optional<std::uint64_t> exp_budget;
  bool no_timestamp = false;
  auto* experiment = app.add_subcommand("experiment", "Run a named scenario (or all) and write a report bundle");
  experiment->add_option("scenario", scenario_name, "Scenario name, or all");
  experiment->add_option("--config", config, "Scenario config file (key = value lines)");
  experiment->add_option("--seed", exp_seed, "Override the scenario seed");
  experiment->add_option("--budget", exp_budget, "Override the scenario budget");
  experiment->add_option("--out", out_dir, "Output directory");
  experiment->add_option("--format", formats, "Comma list of csv, json, svg");
  experiment->add_flag("--no-timestamp", no_timestamp, "Omit the manifest timestamp");

  auto* list = app.add_subcommand("list-scenarios", "List the built-in scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "condgreedy: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (construct->parsed()) {
      emit(construct_opts.out, basis_to_json(load_basis(construct_opts.basis)).dump(2) + "\n", out);
      return 0;
    }
    if (constants->parsed()) {
      if (oracle && kind != "L") throw UsageError("--oracle applies to --kind L only");
      emit(constants_opts.out, constants_table(constants_opts, kind, m_range, oracle, target), out);
      return 0;
    }
    if (greedy->parsed()) {
      emit(greedy_opts.out, greedy_table(greedy_opts, phi_range, exact), out);
      return 0;
    }
    if (list->parsed()) {
      out << list_scenarios();
      return 0;
    }
    if (experiment->parsed()) {
      std::vector<Scenario> todo;
      if (!config.empty()) {
        if (!scenario_name.empty()) throw UsageError("give either a scenario name or --config, not both");
        std::ifstream in(config);
        if (!in) throw UsageError("cannot open config " + config);
        todo.push_back(load_scenario(in));
      } else if (scenario_name == "all") {
        todo = builtin_scenarios();
      } else if (!scenario_name.empty()) {
        todo.push_back(builtin_scenario(scenario_name));
      } else {
        throw UsageError("experiment needs a scenario name or --config");
      }
      BundleOptions bopts{false, false, false};
      for (const auto& f : detail::split_top_level(formats, ',')) {
        const std::string_view t = detail::trim(f);
        if (t == "csv") bopts.csv = true;
        else if (t == "json") bopts.json = true;
        else if (t == "svg") bopts.svg = true;
        else throw UsageError("unknown format '" + std::string(t) + "'");
      }
      std::vector<ScenarioReport> reports;
      std::vector<std::vector<std::filesystem::path>> files;
      bool all_pass = true;
      for (auto s : todo) {
        if (!exp_seed.empty()) s.seed = parse_seed(exp_seed);
        if (exp_budget) s.budget = *exp_budget;
        ScenarioReport rep = run(s);
        files.push_back(write_bundle(rep, out_dir, bopts));
        out << s.name << ": " << (rep.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& c : rep.checks) out << "  " << to_string(c.verdict) << "  " << c.check << "  " << c.detail << "\n";
        all_pass = all_pass && rep.pass;
        reports.push_back(std::move(rep));
      }
      write_manifest(out_dir, reports, files, !no_timestamp);
      return all_pass ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "condgreedy: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "condgreedy: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "condgreedy: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "condgreedy: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace condgreedy
