#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "condgreedy/scenarios.hpp"
#include "json.hpp"

namespace condgreedy {

/// `m,lb,method,delta_m`, one row per rung, shortest round-trip decimals.
std::string ladder_csv(const std::vector<LadderRow>& rows, const GrowthTarget& target);

/// `check,verdict,detail`.
std::string checks_csv(const std::vector<CheckResult>& checks);

nlohmann::json report_json(const ScenarioReport& report);

/// Single polyline of LB_m against m with axes; empty ladders give an
/// empty plot.
std::string ladder_svg(const std::vector<LadderRow>& rows, const std::string& title);

struct BundleOptions {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

/// Writes <name>.csv, <name>_checks.csv, <name>.json and <name>.svg into
/// `dir` (created if needed). Returns the files written.
std::vector<std::filesystem::path> write_bundle(const ScenarioReport& report, const std::filesystem::path& dir,
                                                const BundleOptions& opts = {});

/// manifest.json listing each run, its verdict and files. The timestamp is
/// the only field that varies between identical runs.
void write_manifest(const std::filesystem::path& dir, const std::vector<ScenarioReport>& reports,
                    const std::vector<std::vector<std::filesystem::path>>& files, bool timestamp);

}  // namespace condgreedy
