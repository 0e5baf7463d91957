#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "condgreedy/bases.hpp"

namespace condgreedy {

/// Sorted, zero-based basis indices.
using IndexSet = std::vector<Index>;

enum class WitnessKind {
  Conditionality,  ///< ||S_A f|| / ||f||, used for both L_m and k_m
  QuasiGreedy,     ///< ||f - S_A f|| / ||f|| with A a greedy set
  AlmostGreedy,    ///< ||f - S_A f|| / ||f - S_B f||, |B| <= |A|
};

enum class Method { Oracle, Template, Random };

/// A coefficient vector and index set whose ratio certifies a lower bound.
struct Witness {
  Eigen::VectorXd coeffs;
  IndexSet subset;
  double ratio = 0.0;
  WitnessKind kind = WitnessKind::Conditionality;
  Method method = Method::Random;
  IndexSet reference;  ///< the comparison set B for almost-greedy witnesses
};

struct Estimate {
  double value = 0.0;
  Witness witness;
};

std::string to_string(Method m);
std::string to_string(WitnessKind k);
Method parse_method(const std::string& s);
WitnessKind parse_witness_kind(const std::string& s);

/// Coefficient restriction to A (entries outside A set to zero).
Eigen::VectorXd restrict_coeffs(const Eigen::VectorXd& a, const IndexSet& subset);

/// Ratio recomputed from scratch on `basis`. Throws if f = 0.
double recompute_ratio(const BasisTruncation& basis, const Witness& w);

/// |recomputed - stated| <= rel_tol * max(1, stated).
bool verify(const BasisTruncation& basis, const Witness& w, double rel_tol = 1e-12);

/// Moves coefficient j to position position_map[j] of a basis with
/// `new_size` vectors; the subsets follow.
Witness remap(const Witness& w, const std::vector<Index>& position_map, Index new_size);

/// Highest index carrying a nonzero coefficient plus one (0 for a = 0).
Index support_extent(const Eigen::VectorXd& a);

}  // namespace condgreedy
