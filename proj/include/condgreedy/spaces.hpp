#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace condgreedy {

using Index = Eigen::Index;

/// An exponent in [1, inf) or the symbolic sup value.
///
/// The sup value stands for p = inf in an l_p norm and for the c0-sense
/// (outer exponent 0) in a mixed sum. It never enters arithmetic as a float.
class Exponent {
 public:
  static Exponent finite(double p);
  static Exponent sup() { return Exponent{}; }

  bool is_sup() const { return sup_; }
  double value() const;  ///< throws if is_sup()

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  bool sup_ = true;
  double p_ = 0.0;
};

class SpaceDesc;

struct Lp {
  Exponent p;
};

/// l_inf on a fixed-dimensional truncation of c0.
struct C0Trunc {
  Index dim;
};

struct MixedBlock {
  std::shared_ptr<const SpaceDesc> space;
  Index dim;
};

/// (X_1 + ... + X_n)_q with q = sup meaning max over block norms.
struct MixedSum {
  Exponent outer;
  std::vector<MixedBlock> blocks;
};

struct LorentzPQ {
  double p;
  double q;
};

using WeightSpec = std::variant<std::vector<double>, LorentzPQ>;

/// d_q(w): (sum a_n^q w_n)^(1/q) over the non-increasing rearrangement a.
struct Lorentz {
  double q;
  WeightSpec weights;
};

/// Bounded variation: |a_1| + sum_{j>=2} |a_j - a_{j-1}|.
struct BV {};

class SpaceDesc {
 public:
  using Variant = std::variant<Lp, C0Trunc, MixedSum, Lorentz, BV>;

  SpaceDesc(Variant v);  // validates

  static SpaceDesc lp(double p) { return SpaceDesc{Lp{Exponent::finite(p)}}; }
  static SpaceDesc lp_inf() { return SpaceDesc{Lp{Exponent::sup()}}; }
  static SpaceDesc c0(Index dim) { return SpaceDesc{C0Trunc{dim}}; }
  static SpaceDesc bv() { return SpaceDesc{BV{}}; }
  static SpaceDesc lorentz_pq(double p, double q) {
    return SpaceDesc{Lorentz{q, LorentzPQ{p, q}}};
  }
  static SpaceDesc lorentz(double q, std::vector<double> weights) {
    return SpaceDesc{Lorentz{q, std::move(weights)}};
  }
  /// Blocks given as (space, dim) pairs.
  static SpaceDesc mixed(Exponent outer, std::vector<std::pair<SpaceDesc, Index>> blocks);

  const Variant& variant() const { return v_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  /// Fixed dimension, if the descriptor carries one (C0Trunc, MixedSum).
  std::optional<Index> fixed_dim() const;

  /// Largest dimension this descriptor can evaluate (explicit Lorentz weights).
  std::optional<Index> max_dim() const;

  /// True when the norm only depends on |v| coordinate-wise, is monotone in
  /// it, and ignores zero coordinates. Rows outside a vector's support may
  /// then be dropped without changing its norm.
  bool is_lattice() const;

 private:
  Variant v_;
};

/// Throws std::invalid_argument on dimension mismatch or NaN entries.
double norm(const SpaceDesc& space, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Norm without argument checks; `v` must already satisfy the descriptor.
double norm_unchecked(const SpaceDesc& space, const Eigen::Ref<const Eigen::VectorXd>& v);

void check_dim(const SpaceDesc& space, Index dim);

/// Descriptor for the coordinates `rows` (sorted, unique) of a lattice space.
SpaceDesc restrict_rows(const SpaceDesc& space, Index ambient_dim,
                        const std::vector<Index>& rows);

/// Canonical text form: `lp:1`, `lp:inf`, `c0:8`, `bv`, `lorentz:p=2,q=1`,
/// `lorentz:q=2,w=[1,0.5]`, `mixed:q=2[lp:1^4,lp:1^8]` (q=0 is the sup sum).
std::string to_string(const SpaceDesc& space);
SpaceDesc parse_space(std::string_view text);

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> nonincreasing_rearrangement(
    const Eigen::MatrixBase<Derived>& v) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> a = v.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<>{});
  return a;
}

}  // namespace condgreedy
