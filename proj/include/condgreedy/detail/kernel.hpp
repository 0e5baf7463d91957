#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "condgreedy/bases.hpp"
#include "condgreedy/witness.hpp"

namespace condgreedy::detail {

/// Sparse view of the first `cols` columns. For lattice spaces the rows no
/// column touches are dropped and the space restricted to match, which
/// leaves every norm unchanged.
class Kernel {
 public:
  Kernel(const BasisTruncation& basis, Index cols);

  Index cols() const { return cols_; }
  Index rows() const { return rows_; }
  const SpaceDesc& space() const { return space_; }

  Eigen::VectorXd zero() const { return Eigen::VectorXd::Zero(rows_); }
  void add(Eigen::VectorXd& v, Index j, double c) const {
    for (const auto& [r, x] : entries_[static_cast<std::size_t>(j)]) v[r] += c * x;
  }
  double norm(const Eigen::VectorXd& v) const { return norm_unchecked(space_, v); }

  /// Synthesis of the first cols() coefficients, accumulated in index order.
  Eigen::VectorXd synth(const Eigen::VectorXd& a) const;
  Eigen::VectorXd synth(const Eigen::VectorXd& a, const IndexSet& subset) const;

  /// True when the space is a lattice and no two columns share a row.
  bool disjoint_lattice() const;

 private:
  SpaceDesc space_;
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::vector<std::pair<Index, double>>> entries_;
};

struct SubsetChoice {
  double value = 0.0;  ///< ||sum_{j in A} a_j x_j||
  IndexSet subset;
};

/// Number of subsets of an s-set with at most `limit` elements, saturating.
std::uint64_t bounded_subset_count(Index s, Index limit);

/// max ||S_A f|| over A inside supp(a), |A| <= limit. Exhaustive when the
/// count is at most `exhaustive_cap`, otherwise a multi-start flip search
/// (a lower bound). `hint`, if non-null, is an extra starting set.
SubsetChoice best_subset(const Kernel& k, const Eigen::VectorXd& a, Index limit, std::uint64_t exhaustive_cap,
                         const IndexSet* hint = nullptr);

/// Steepest flip (and, for small supports, swap) ascent from `start`.
SubsetChoice improve_subset(const Kernel& k, const Eigen::VectorXd& a, Index limit, const IndexSet& start);

/// Worker count: CONDGREEDY_THREADS if set and positive, else the hardware.
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on thread_count() workers. fn must only
/// write to slot i of caller-owned storage.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn);

}  // namespace condgreedy::detail

#include "condgreedy/detail/parallel.ipp"
