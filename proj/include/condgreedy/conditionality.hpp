#pragma once

#include <cstdint>
#include <vector>

#include "condgreedy/bases.hpp"
#include "condgreedy/witness.hpp"

namespace condgreedy {

struct SearchOptions {
  Index oracle_guard = 12;        ///< largest m the sign-grid oracle accepts
  std::size_t ascent_starts = 128; ///< grid points that seed local ascent
  std::size_t max_ascent_steps = 400;
  double min_gain = 1e-10;        ///< smallest accepted ascent improvement
  std::uint64_t exhaustive_subset_cap = std::uint64_t{1} << 16;
};

/// Structured witness families. Each yields coefficient patterns on the
/// first m positions together with the subsets worth trying on them.
enum class TemplateFamily {
  AlternatingParity,  ///< a = 1 on 1..m, A = odd or even positions
  AlternatingSign,    ///< a_j = (-1)^(j+1), last entry halved, A = one sign class
  DyadicLevels,       ///< a_j = 2^-floor(log2 j), A = any union of dyadic levels
};

struct TemplateSet {
  std::vector<TemplateFamily> families{TemplateFamily::AlternatingParity, TemplateFamily::AlternatingSign,
                                       TemplateFamily::DyadicLevels};
  std::vector<Witness> seeds;  ///< extra witnesses on this basis, tried as given and ascended

  static TemplateSet none() { return TemplateSet{{}, {}}; }
};

/// (3^m - 1) / 2: sign patterns on m coordinates up to a global sign.
std::uint64_t grid_size(Index m);

/// Best witness of one family at support m (before ascent).
Witness template_witness(const BasisTruncation& basis, Index m, TemplateFamily family);

/// Sign-grid oracle for L_m with steepest local ascent from the best grid
/// points. A certified lower bound; exactly 1 when the columns have
/// disjoint supports in a lattice norm. Throws std::domain_error above the
/// guard.
Estimate L_m_oracle(const BasisTruncation& basis, Index m, const SearchOptions& opts = {});

/// Max over templates, `budget` random samples and, once the budget covers
/// grid_size(m) and m is within the guard, the oracle itself. Each
/// candidate is locally ascended. Never decreases as budget grows.
Estimate L_m_estimate(const BasisTruncation& basis, Index m, std::uint64_t budget, std::uint64_t seed,
                      const TemplateSet& templates = {}, const SearchOptions& opts = {});

/// Lower bound for sup_{|A| <= m} ||S_A|| with f ranging over the whole
/// truncation. Seeded with the L_m search, so it is never below it.
Estimate k_m_estimate(const BasisTruncation& basis, Index m, std::uint64_t budget, std::uint64_t seed,
                      const SearchOptions& opts = {});

}  // namespace condgreedy
