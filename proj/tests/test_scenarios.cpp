#include <algorithm>
#include <sstream>

#include "condgreedy/scenarios.hpp"
#include "doctest.h"

using namespace condgreedy;

namespace {

const CheckResult& find(const ScenarioReport& r, const std::string& id) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.check == id; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("built-in catalogue") {
  const auto all = builtin_scenarios();
  std::vector<std::string> names;
  for (const auto& s : all) names.push_back(s.name);
  for (const char* n : {"unit-control", "difference-linear", "summing-linear", "lindenstrauss-log", "interleave-transfer",
                        "blocksum-L1", "pq-split", "lorentz-embed"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  const auto known = known_checks();
  for (const auto& s : all)
    for (const auto& c : s.checks) CHECK(std::find(known.begin(), known.end(), c) != known.end());
  CHECK(builtin_scenario("lindenstrauss-log").ladder == std::vector<Index>{4, 8, 16, 32, 64});
  CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
}

TEST_CASE("unit control") {
  const ScenarioReport r = run(builtin_scenario("unit-control"));
  CHECK(r.pass);
  for (const auto& e : r.ladder) CHECK(e.row.lb == 1.0);
  CHECK(find(r, "unit-control lp:inf").verdict == Verdict::Pass);
}

TEST_CASE("difference ladder") {
  Scenario s = builtin_scenario("difference-linear");
  s.ladder = {2, 3, 4, 5, 6};
  const ScenarioReport r = run(s);
  CHECK(r.pass);
  for (const auto& e : r.ladder) CHECK(e.row.lb >= static_cast<double>(e.row.m - 1));
  REQUIRE(r.growth);
  CHECK(r.growth->slope == doctest::Approx(1));
  CHECK(find(r, "template-matches-oracle").verdict == Verdict::Pass);
}

TEST_CASE("lorentz suite reports the lifting bound") {
  const ScenarioReport r = run(builtin_scenario("lorentz-embed"));
  CHECK(find(r, "lorentz-identity").verdict == Verdict::Pass);
  CHECK(find(r, "lorentz-lift-sup").verdict == Verdict::Pass);
  CHECK(find(r, "lorentz-retract-l1").verdict == Verdict::Pass);
  CHECK(find(r, "lorentz-retract-sup").verdict == Verdict::Pass);
  CHECK(find(r, "lorentz-lift-bv-sharp").verdict == Verdict::Pass);
  // ||L f||_BV = 2 ||f||_1, so the unit bound cannot hold
  CHECK(find(r, "lorentz-lift-bv").verdict == Verdict::Fail);
  CHECK_FALSE(r.pass);
}

TEST_CASE("config files") {
  std::istringstream in(R"(# small custom run
name = custom
basis = summing:6
ladder = 2..6
target = linear
checks = lb-ge-quarter-m, monotone, fit
budget = 4
seed = 0x2A
)");
  const Scenario s = load_scenario(in);
  CHECK(s.name == "custom");
  CHECK(s.ladder == std::vector<Index>{2, 3, 4, 5, 6});
  CHECK(s.seed == 42);
  CHECK(s.budget == 4);
  const ScenarioReport r = run(s);
  CHECK(r.pass);
  REQUIRE(r.ladder.size() == 5);
  CHECK(r.ladder.back().row.lb == 6.0);

  std::istringstream preset("name = summing-linear\nladder = 2..4\n");
  const Scenario p = load_scenario(preset);
  CHECK(p.basis == "summing:10");
  CHECK(p.ladder == std::vector<Index>{2, 3, 4});

  std::istringstream bad_key("name = x\ncolour = red\n");
  CHECK_THROWS_AS(load_scenario(bad_key), std::invalid_argument);
  std::istringstream bad_check("name = x\nbasis = summing:4\nladder = 2..4\nchecks = magic\n");
  CHECK_THROWS_AS(load_scenario(bad_check), std::invalid_argument);
}

TEST_CASE("invalid scenarios") {
  Scenario s = builtin_scenario("summing-linear");
  s.ladder = {2, 11};
  CHECK_THROWS_AS(run(s), std::invalid_argument);
  s.ladder = {4, 2};
  CHECK_THROWS_AS(run(s), std::invalid_argument);
}

}  // TEST_SUITE
