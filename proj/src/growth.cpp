#include "condgreedy/growth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "condgreedy/detail/text.hpp"

namespace condgreedy {

GrowthTarget GrowthTarget::power(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("power growth exponent must lie in (0, 1)");
  return GrowthTarget(Kind::Power, a);
}

double GrowthTarget::operator()(double m) const {
  switch (kind_) {
    case Kind::Log: return std::log2(m);
    case Kind::Power: return std::pow(m, exponent_);
    case Kind::Linear: return m;
  }
  return m;
}

std::string GrowthTarget::to_string() const {
  switch (kind_) {
    case Kind::Log: return "log";
    case Kind::Power: return "power:" + detail::format_double(exponent_);
    case Kind::Linear: return "linear";
  }
  return "linear";
}

GrowthTarget GrowthTarget::parse(const std::string& text) {
  const std::string t(detail::trim(text));
  if (t == "log") return log();
  if (t == "linear") return linear();
  if (t.rfind("power:", 0) == 0) return power(detail::parse_double(t.substr(6)));
  throw std::invalid_argument("unknown growth target '" + t + "' (log, linear, power:a)");
}

GrowthReport growth_fit(const std::vector<LadderRow>& ladder, const GrowthTarget& target, const FitBand& band) {
  if (ladder.size() < 4) throw std::invalid_argument("growth fit needs at least four ladder points");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i].m <= ladder[i - 1].m) throw std::invalid_argument("ladder m values must increase strictly");
  if (ladder.front().m < 1) throw std::invalid_argument("ladder m values must be positive");

  GrowthReport rep;
  rep.ladder = ladder;
  rep.target = target;
  const auto n = static_cast<Index>(ladder.size());
  Eigen::VectorXd x(n), y(n);
  for (Index i = 0; i < n; ++i) {
    x[i] = target(static_cast<double>(ladder[static_cast<std::size_t>(i)].m));
    y[i] = ladder[static_cast<std::size_t>(i)].lb;
    rep.delta.push_back(x[i]);
    rep.doubling = std::max(rep.doubling, target(2.0 * static_cast<double>(ladder[static_cast<std::size_t>(i)].m)) / x[i]);
    if (i > 0 && y[i] < y[i - 1]) rep.monotone = false;
  }

  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double sxx = xc.squaredNorm(), syy = yc.squaredNorm();
  rep.slope = sxx > 0.0 ? xc.dot(yc) / sxx : 0.0;
  rep.intercept = y.mean() - rep.slope * x.mean();
  if (syy <= 1e-24 * std::max(1.0, y.squaredNorm())) {
    rep.note = "LB_m constant along the ladder; R^2 undefined";
    rep.pass = false;
    return rep;
  }
  const double sse = (yc - rep.slope * xc).squaredNorm();
  rep.r2 = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  const bool r2_ok = *rep.r2 >= band.min_r2;
  const bool slope_ok = rep.slope >= band.slope_min && rep.slope <= band.slope_max;
  rep.pass = r2_ok && slope_ok;
  if (!r2_ok) rep.note = "R^2 " + detail::format_sig(*rep.r2, 4) + " below " + detail::format_sig(band.min_r2, 4);
  if (!slope_ok) {
    if (!rep.note.empty()) rep.note += "; ";
    rep.note += "slope " + detail::format_sig(rep.slope, 4) + " outside [" + detail::format_sig(band.slope_min, 4) +
                ", " + detail::format_sig(band.slope_max, 4) + "]";
  }
  return rep;
}

}  // namespace condgreedy
