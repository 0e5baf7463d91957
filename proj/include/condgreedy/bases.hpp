#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "condgreedy/spaces.hpp"

namespace condgreedy {

/// The first d vectors of a basis, written as columns in an ambient
/// coordinate space. Coefficients a synthesize to f = columns * a.
/// Immutable once built.
class BasisTruncation {
 public:
  /// Throws std::invalid_argument if the columns are rank deficient
  /// (tolerance 1e-10) or do not fit the ambient space.
  BasisTruncation(std::string label, SpaceDesc space, Eigen::MatrixXd columns);

  Index size() const { return columns_.cols(); }
  Index ambient_dim() const { return columns_.rows(); }
  const Eigen::MatrixXd& columns() const { return columns_; }
  auto column(Index j) const { return columns_.col(j); }
  const SpaceDesc& space() const { return space_; }
  const std::string& label() const { return label_; }

  /// c with 1/c <= ||x_j|| <= c for every column.
  double seminormalization() const { return seminormalization_; }

  /// Nonzero rows of column j, ascending.
  const std::vector<Index>& column_support(Index j) const { return supports_[static_cast<std::size_t>(j)]; }

  Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;

  double norm_of(const Eigen::Ref<const Eigen::VectorXd>& ambient) const { return norm(space_, ambient); }

 private:
  std::string label_;
  SpaceDesc space_;
  Eigen::MatrixXd columns_;
  std::vector<std::vector<Index>> supports_;
  double seminormalization_ = 1.0;
};

/// Linear maps P: X^{d_n}[B] -> Y and Q: X^{d_n}[B] -> Z, as matrices acting
/// on ambient coordinates of the d_n-truncation. Either target may be
/// zero-dimensional (zero rows).
struct BlockMapPair {
  Eigen::MatrixXd P;
  Eigen::MatrixXd Q;
  SpaceDesc target_Y;
  SpaceDesc target_Z;
};

BasisTruncation unit_vector_system(Index d, const SpaceDesc& space);

/// l_j = e_j - (e_{2j} + e_{2j+1}) / 2 in l_1^{2d+1}.
BasisTruncation lindenstrauss(Index d);

/// s_j = e_1 + ... + e_j in the c0 truncation of dimension d.
BasisTruncation summing(Index d);

/// d_j = e_j - e_{j-1}, e_0 = 0, in l_1^d.
BasisTruncation difference(Index d);

/// First `d` columns. For lattice spaces the ambient shrinks to the leading
/// rows that carry a nonzero entry.
BasisTruncation truncate(const BasisTruncation& basis, Index d);

/// (x_1,0),(0,y_1),(x_2,0),... in X (+) Y with ||(x,y)|| = max(||x||,||y||).
/// With unequal lengths the longer tail follows in order.
BasisTruncation interleave(const BasisTruncation& b0, const BasisTruncation& b1);

/// Block sum of the d_n-truncations of `basis` in the l_p-sum (p = 0: c0-sense).
BasisTruncation block_sum(const BasisTruncation& basis, const std::vector<Index>& dims, double p);

struct PQBlock {
  Index dim;
  BlockMapPair maps;
};

/// Images (P_n x_j, Q_n x_j) placed in block n of (sum Y_n)_p (+) (sum Z_n)_q.
BasisTruncation pq_block_sum(const BasisTruncation& basis, const std::vector<PQBlock>& blocks, double p, double q);

/// Restriction to the first / second half of the ambient coordinates, as
/// l_1 targets. Used with the difference system.
BlockMapPair half_split_maps(Index ambient_dim, const SpaceDesc& half_space);

/// Canonical projections of l_inf^n (+) l_2^{2^n-n-2} onto its two factors.
BlockMapPair canonical_product_projections(Index n);

/// Position (block r, index j) of basis vector k inside a block sum, all
/// zero-based: k = j + sum_{n<r} dims[n], 0 <= j < dims[r].
struct BlockPosition {
  std::size_t block;
  Index local;
};
BlockPosition block_position(const std::vector<Index>& dims, Index k);

/// L((a_j)) = (a_1, 0, a_2, 0, ...).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> lorentz_lift(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>::Zero(2 * v.size());
  for (Index j = 0; j < v.size(); ++j) out[2 * j] = v[j];
  return out;
}

/// R((a_j)) = (a_1 - a_2, a_3 - a_4, ...); an odd tail is paired with 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> lorentz_retract(const Eigen::MatrixBase<Derived>& v) {
  const Index n = (v.size() + 1) / 2;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(n);
  for (Index j = 0; j < n; ++j) {
    const auto second = 2 * j + 1 < v.size() ? v[2 * j + 1] : typename Derived::Scalar(0);
    out[j] = v[2 * j] - second;
  }
  return out;
}

}  // namespace condgreedy
