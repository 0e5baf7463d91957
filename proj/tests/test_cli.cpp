#include <filesystem>
#include <fstream>
#include <sstream>

#include "condgreedy/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace condgreedy;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("condgreedy_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"constants", "--m", "2..4"}).code == 2);
  const Run bad = cli({"constants", "--basis", "nope:3", "--m", "2..4"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("nope") != std::string::npos);
  CHECK(cli({"constants", "--basis", "difference:4", "--m", "2..4", "--seed", "xyz"}).code == 2);
  CHECK(cli({"constants", "--basis", "difference:4", "--m", "2..4", "--kind", "k", "--oracle"}).code == 2);
  CHECK(cli({"experiment"}).code == 2);
  CHECK(cli({"experiment", "not-a-scenario"}).code == 2);
}

TEST_CASE("help") {
  const Run r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("experiment") != std::string::npos);
}

TEST_CASE("construct") {
  const Run r = cli({"construct", "--basis", "difference:3"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["size"] == 3);
  CHECK(doc["space"] == "lp:1");
  CHECK(doc["columns"][1] == nlohmann::json::array({-1.0, 1.0, 0.0}));
}

TEST_CASE("constants csv and json") {
  const Run r = cli({"constants", "--basis", "lindenstrauss:8", "--m", "2..5", "--oracle"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "m,lb,method,delta_m\n"
        "2,1,oracle,1\n"
        "3,1,oracle,1.584962500721156\n"
        "4,1.25,oracle,2\n"
        "5,1.5,oracle,2.321928094887362\n");
  const Run j = cli({"constants", "--basis", "summing:6", "--m", "2..6", "--oracle", "--target", "linear", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["ladder"].size() == 5);
  CHECK(doc["ladder"][4]["lb"] == 6.0);
  CHECK(doc["fit"]["slope"].get<double>() == doctest::Approx(1));
  const Run k = cli({"constants", "--basis", "difference:8", "--kind", "k", "--m", "4", "--budget", "4"});
  REQUIRE(k.code == 0);
  CHECK(std::stod(k.out.substr(k.out.find('\n') + 3)) >= 7.0);
}

TEST_CASE("greedy-check") {
  const Run r = cli({"greedy-check", "--basis", "unit(4,lp:1)", "--m", "1..2", "--exact", "--budget", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "quantity,m,value\n"
        "quasi_greedy,,1\n"
        "almost_greedy,,1\n"
        "phi,1,1\n"
        "democracy,1,1\n"
        "phi,2,2\n"
        "democracy,2,1\n");
}

TEST_CASE("list-scenarios") {
  const Run r = cli({"list-scenarios"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lindenstrauss-log") != std::string::npos);
  CHECK(r.out.find("blocksum-L1") != std::string::npos);
}

TEST_CASE("experiment bundle") {
  const auto dir = scratch_dir("bundle");
  const Run r = cli({"experiment", "unit-control", "--out", dir.string(), "--no-timestamp"});
  CHECK(r.code == 0);
  CHECK(r.out.find("unit-control: PASS") != std::string::npos);
  for (const char* f : {"unit-control.csv", "unit-control_checks.csv", "unit-control.json", "unit-control.svg", "manifest.json"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(slurp(dir / "unit-control.csv") == "m,lb,method,delta_m\n2,1,oracle,2\n4,1,oracle,4\n8,1,oracle,8\n16,1,oracle,16\n");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK_FALSE(manifest.contains("timestamp"));
  CHECK(manifest["runs"][0]["verdict"] == "PASS");
  const auto report = nlohmann::json::parse(slurp(dir / "unit-control.json"));
  CHECK(report["verdict"] == "PASS");
  CHECK(report["ladder"][0]["witness"]["ratio"] == 1.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("failing experiment exits 1 and keeps its report") {
  const auto dir = scratch_dir("fail");
  const Run r = cli({"experiment", "lorentz-embed", "--out", dir.string(), "--format", "csv"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL  lorentz-lift-bv ") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "lorentz-embed_checks.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "lorentz-embed.json"));
  CHECK(nlohmann::json::parse(slurp(dir / "manifest.json")).contains("timestamp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment from a config file") {
  const auto dir = scratch_dir("config");
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "name = small-difference\nbasis = difference:5\nladder = 2..5\ntarget = linear\nchecks = lb-ge-m-minus-1, fit\n";
  }
  const Run r = cli({"experiment", "--config", (dir / "run.cfg").string(), "--out", dir.string(), "--no-timestamp"});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "small-difference.csv").find("5,5,oracle,5") != std::string::npos);
  CHECK(cli({"experiment", "unit-control", "--config", (dir / "run.cfg").string()}).code == 2);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
