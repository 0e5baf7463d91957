#include "condgreedy/witness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace condgreedy {

std::string to_string(Method m) {
  switch (m) {
    case Method::Oracle: return "oracle";
    case Method::Template: return "template";
    case Method::Random: return "random";
  }
  return "random";
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::Conditionality: return "conditionality";
    case WitnessKind::QuasiGreedy: return "quasi_greedy";
    case WitnessKind::AlmostGreedy: return "almost_greedy";
  }
  return "conditionality";
}

Method parse_method(const std::string& s) {
  if (s == "oracle") return Method::Oracle;
  if (s == "template") return Method::Template;
  if (s == "random") return Method::Random;
  throw std::invalid_argument("unknown method tag: " + s);
}

WitnessKind parse_witness_kind(const std::string& s) {
  if (s == "conditionality") return WitnessKind::Conditionality;
  if (s == "quasi_greedy") return WitnessKind::QuasiGreedy;
  if (s == "almost_greedy") return WitnessKind::AlmostGreedy;
  throw std::invalid_argument("unknown witness kind: " + s);
}

Eigen::VectorXd restrict_coeffs(const Eigen::VectorXd& a, const IndexSet& subset) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size());
  for (Index j : subset) {
    if (j < 0 || j >= a.size()) throw std::out_of_range("subset index outside the coefficient vector");
    out[j] = a[j];
  }
  return out;
}

double recompute_ratio(const BasisTruncation& basis, const Witness& w) {
  if (w.coeffs.size() != basis.size())
    throw std::invalid_argument("witness has " + std::to_string(w.coeffs.size()) + " coefficients, basis has " +
                                std::to_string(basis.size()));
  const Eigen::VectorXd f = basis.synthesize(w.coeffs);
  const Eigen::VectorXd sa = basis.synthesize(restrict_coeffs(w.coeffs, w.subset));
  switch (w.kind) {
    case WitnessKind::Conditionality: {
      const double fn = basis.norm_of(f);
      if (fn == 0.0) throw std::invalid_argument("witness synthesizes the zero vector");
      return basis.norm_of(sa) / fn;
    }
    case WitnessKind::QuasiGreedy: {
      const double fn = basis.norm_of(f);
      if (fn == 0.0) throw std::invalid_argument("witness synthesizes the zero vector");
      return basis.norm_of(f - sa) / fn;
    }
    case WitnessKind::AlmostGreedy: {
      if (w.reference.size() > w.subset.size()) throw std::invalid_argument("reference set larger than the greedy set");
      const double num = basis.norm_of(f - sa);
      const double den = basis.norm_of(f - basis.synthesize(restrict_coeffs(w.coeffs, w.reference)));
      if (den < 1e-12) return num < 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
      return num / den;
    }
  }
  return 0.0;
}

bool verify(const BasisTruncation& basis, const Witness& w, double rel_tol) {
  const double r = recompute_ratio(basis, w);
  if (std::isinf(r) || std::isinf(w.ratio)) return r == w.ratio;
  return std::abs(r - w.ratio) <= rel_tol * std::max(1.0, std::abs(w.ratio));
}

Witness remap(const Witness& w, const std::vector<Index>& position_map, Index new_size) {
  if (static_cast<Index>(position_map.size()) < w.coeffs.size())
    throw std::invalid_argument("position map shorter than the witness");
  Witness out = w;
  out.coeffs = Eigen::VectorXd::Zero(new_size);
  for (Index j = 0; j < w.coeffs.size(); ++j) {
    if (w.coeffs[j] == 0.0) continue;
    const Index k = position_map[static_cast<std::size_t>(j)];
    if (k < 0 || k >= new_size) throw std::out_of_range("position map leaves the target basis");
    out.coeffs[k] = w.coeffs[j];
  }
  auto move_set = [&](const IndexSet& s) {
    IndexSet r;
    r.reserve(s.size());
    for (Index j : s) r.push_back(position_map[static_cast<std::size_t>(j)]);
    std::sort(r.begin(), r.end());
    return r;
  };
  out.subset = move_set(w.subset);
  out.reference = move_set(w.reference);
  return out;
}

Index support_extent(const Eigen::VectorXd& a) {
  for (Index j = a.size(); j > 0; --j)
    if (a[j - 1] != 0.0) return j;
  return 0;
}

}  // namespace condgreedy
