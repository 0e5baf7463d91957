#pragma once

#include <optional>
#include <string>
#include <vector>

#include "condgreedy/witness.hpp"

namespace condgreedy {

/// Growth profile delta(m): log2 m, m^a with 0 < a < 1, or m.
class GrowthTarget {
 public:
  enum class Kind { Log, Power, Linear };

  static GrowthTarget log() { return GrowthTarget(Kind::Log, 0.0); }
  static GrowthTarget linear() { return GrowthTarget(Kind::Linear, 1.0); }
  /// Throws std::invalid_argument unless 0 < a < 1.
  static GrowthTarget power(double a);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double operator()(double m) const;

  /// "log", "linear", "power:0.5".
  std::string to_string() const;
  static GrowthTarget parse(const std::string& text);

 private:
  GrowthTarget(Kind k, double a) : kind_(k), exponent_(a) {}
  Kind kind_;
  double exponent_;
};

struct LadderRow {
  Index m = 0;
  double lb = 0.0;
  Method method = Method::Random;
};

struct FitBand {
  double slope_min = 0.1;
  double slope_max = 10.0;
  double min_r2 = 0.95;
};

struct GrowthReport {
  std::vector<LadderRow> ladder;
  std::vector<double> delta;  ///< delta(m) per rung
  GrowthTarget target = GrowthTarget::log();
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> r2;  ///< empty when LB_m is constant
  bool monotone = true;      ///< LB_m non-decreasing along the ladder
  double doubling = 0.0;     ///< max delta(2m)/delta(m) over the rungs
  bool pass = false;
  std::string note;
};

/// Least squares LB_m ~ slope * delta(m) + intercept. PASS needs R^2 at or
/// above the band and the slope inside it. Throws std::invalid_argument
/// for fewer than four rungs or m not strictly increasing.
GrowthReport growth_fit(const std::vector<LadderRow>& ladder, const GrowthTarget& target, const FitBand& band = {});

}  // namespace condgreedy
