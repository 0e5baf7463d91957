#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "condgreedy/growth.hpp"
#include "condgreedy/witness.hpp"

namespace condgreedy {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// A named, reproducible experiment: a basis, an m-ladder for L_m, a
/// growth target, and property checks.
struct Scenario {
  std::string name;
  std::string basis;          ///< basis spec; empty for pure property suites
  std::vector<Index> ladder;
  GrowthTarget target = GrowthTarget::log();
  std::vector<std::string> checks;
  std::uint64_t budget = 32;  ///< random samples per estimated rung
  std::uint64_t seed = kDefaultSeed;
  bool oracle = true;         ///< use the oracle on rungs within its guard
};

enum class Verdict { Pass, Fail, Info };
std::string to_string(Verdict v);

struct CheckResult {
  std::string check;
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

struct LadderEntry {
  LadderRow row;
  Witness witness;
};

struct ScenarioReport {
  Scenario scenario;
  std::vector<LadderEntry> ladder;
  std::optional<GrowthReport> growth;  ///< present with four or more rungs
  std::vector<CheckResult> checks;
  bool pass = false;
};

/// Decimal or 0x-prefixed hexadecimal; throws std::invalid_argument.
std::uint64_t parse_seed(const std::string& text);

std::vector<Scenario> builtin_scenarios();

/// Throws std::invalid_argument for an unknown name.
Scenario builtin_scenario(const std::string& name);

/// Check identifiers understood by run().
std::vector<std::string> known_checks();

/// `key = value` lines, `#` comments. Keys: name, basis, ladder, target,
/// checks (comma list), budget, seed, oracle (true/false). Unset keys
/// keep the defaults of the built-in scenario with the same name, if any.
Scenario load_scenario(std::istream& in);

/// Ladder, growth fit and checks. A failed check makes a FAIL verdict;
/// exceptions are reserved for invalid scenarios.
ScenarioReport run(const Scenario& scenario);

}  // namespace condgreedy
