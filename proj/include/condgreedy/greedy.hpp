#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "condgreedy/bases.hpp"
#include "condgreedy/witness.hpp"

namespace condgreedy {

enum class GreedyMode { Canonical, All };

/// Greedy sets of size m for a coefficient vector: every member A has
/// min_{k in A} |a_k| >= max_{j not in A} |a_j|.
struct GreedySetFamily {
  Eigen::VectorXd coeffs;
  Index m = 0;
  IndexSet canonical;            ///< ties broken towards the lower index
  std::vector<IndexSet> all_sets;  ///< filled in All mode, lexicographic order
};

/// S_A f as an ambient vector. Throws std::out_of_range on a bad index.
Eigen::VectorXd project(const BasisTruncation& basis, const Eigen::VectorXd& coeffs, const IndexSet& subset);

/// Throws std::invalid_argument unless 0 <= m <= coeffs.size(). In All
/// mode the count is the product of binomials over the tie groups and must
/// stay below 2^20.
GreedySetFamily greedy_sets(const Eigen::VectorXd& coeffs, Index m, GreedyMode mode);

bool is_greedy_set(const Eigen::VectorXd& coeffs, const IndexSet& subset);

/// Number of greedy sets of size m, saturating at 2^62.
std::uint64_t greedy_set_count(const Eigen::VectorXd& coeffs, Index m);

struct GreedySearchOptions {
  Index grid_max_dim = 12;             ///< sign grid used up to this d
  std::size_t ascent_starts = 16;      ///< grid points refined by ascent
  std::size_t max_ascent_sweeps = 60;
  Index exhaustive_denominator_dim = 12;  ///< exact min over B up to this support
  std::uint64_t tie_group_cap = std::uint64_t{1} << 12;
};

/// Lower bound for the quasi-greedy constant of the truncation:
/// sup ||f - S_A f|| / ||f|| over sampled f and all of their greedy sets.
/// Sign grid for d <= grid_max_dim, then `budget` random magnitude vectors
/// with coordinate-wise ascent. Throws if budget == 0.
Estimate quasi_greedy_constant_lb(const BasisTruncation& basis, std::uint64_t budget, std::uint64_t seed,
                                  const GreedySearchOptions& opts = {});

/// Lower bound for the almost-greedy constant: the denominator is the
/// smallest ||f - S_B f|| over |B| <= |A|. A vanishing denominator under a
/// nonzero numerator yields an infinite witness.
Estimate almost_greedy_constant_lb(const BasisTruncation& basis, std::uint64_t budget, std::uint64_t seed,
                                   const GreedySearchOptions& opts = {});

enum class PhiMode { Exact, Search };

/// Largest d for which exact enumeration of index sets is accepted.
inline constexpr Index kExactSetGuard = 20;

/// sup_{|A| <= m} ||sum_{j in A} x_j||. Exact mode throws std::domain_error
/// for d > kExactSetGuard; search mode is a lower bound.
double fundamental_function(const BasisTruncation& basis, Index m, PhiMode mode, std::uint64_t budget = 64,
                            std::uint64_t seed = 0);

/// phi_m / min_{|A| = m} ||sum_{j in A} x_j||. In search mode both sides
/// are searched, so the value is an estimate, not a bound.
double democracy_ratio(const BasisTruncation& basis, Index m, PhiMode mode, std::uint64_t budget = 64,
                       std::uint64_t seed = 0);

}  // namespace condgreedy
