#include "condgreedy/bases.hpp"

#include "condgreedy/detail/text.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace condgreedy {

namespace {

constexpr double kRankTolerance = 1e-10;

Index rank_of(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(kRankTolerance);
  return qr.rank();
}

std::string dims_label(const std::vector<Index>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

}  // namespace

BasisTruncation::BasisTruncation(std::string label, SpaceDesc space, Eigen::MatrixXd columns)
    : label_(std::move(label)), space_(std::move(space)), columns_(std::move(columns)) {
  if (columns_.cols() < 1) throw std::invalid_argument("basis truncation needs at least one vector");
  check_dim(space_, columns_.rows());
  if (columns_.hasNaN()) throw std::invalid_argument("basis columns contain NaN");
  if (rank_of(columns_) < columns_.cols())
    throw std::invalid_argument("basis columns of '" + label_ + "' are linearly dependent");

  supports_.resize(static_cast<std::size_t>(columns_.cols()));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index j = 0; j < columns_.cols(); ++j) {
    for (Index i = 0; i < columns_.rows(); ++i)
      if (columns_(i, j) != 0.0) supports_[static_cast<std::size_t>(j)].push_back(i);
    const double n = norm_unchecked(space_, columns_.col(j));
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  seminormalization_ = std::max(hi, 1.0 / lo);
}

Eigen::VectorXd BasisTruncation::synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
  if (coeffs.size() != size())
    throw std::invalid_argument("coefficient vector has " + std::to_string(coeffs.size()) + " entries, basis has " +
                                std::to_string(size()));
  return columns_ * coeffs;
}

BasisTruncation unit_vector_system(Index d, const SpaceDesc& space) {
  if (d < 1) throw std::invalid_argument("unit vector system needs d >= 1");
  return BasisTruncation("unit(" + std::to_string(d) + "," + to_string(space) + ")", space,
                         Eigen::MatrixXd::Identity(d, d));
}

BasisTruncation lindenstrauss(Index d) {
  if (d < 1) throw std::invalid_argument("Lindenstrauss truncation needs d >= 1");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * d + 1, d);
  for (Index j = 1; j <= d; ++j) {  // 1-based column index, row r stored at r-1
    x(j - 1, j - 1) = 1.0;
    x(2 * j - 1, j - 1) = -0.5;
    x(2 * j, j - 1) = -0.5;
  }
  return BasisTruncation("lindenstrauss:" + std::to_string(d), SpaceDesc::lp(1), std::move(x));
}

BasisTruncation summing(Index d) {
  if (d < 1) throw std::invalid_argument("summing system needs d >= 1");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
  x.triangularView<Eigen::Upper>().setOnes();
  return BasisTruncation("summing:" + std::to_string(d), SpaceDesc::c0(d), std::move(x));
}

BasisTruncation difference(Index d) {
  if (d < 1) throw std::invalid_argument("difference system needs d >= 1");
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(d, d);
  for (Index j = 1; j < d; ++j) x(j - 1, j) = -1.0;
  return BasisTruncation("difference:" + std::to_string(d), SpaceDesc::lp(1), std::move(x));
}

BasisTruncation truncate(const BasisTruncation& basis, Index d) {
  if (d < 1 || d > basis.size())
    throw std::invalid_argument("cannot truncate '" + basis.label() + "' of size " + std::to_string(basis.size()) +
                                " to " + std::to_string(d));
  const std::string label = "truncate(" + basis.label() + "," + std::to_string(d) + ")";
  if (!basis.space().is_lattice() || (d == basis.size() && basis.space().fixed_dim()))
    return BasisTruncation(label, basis.space(), basis.columns().leftCols(d));
  Index rows = 0;
  for (Index j = 0; j < d; ++j)
    if (!basis.column_support(j).empty()) rows = std::max(rows, basis.column_support(j).back() + 1);
  std::vector<Index> prefix(static_cast<std::size_t>(rows));
  std::iota(prefix.begin(), prefix.end(), Index{0});
  return BasisTruncation(label, restrict_rows(basis.space(), basis.ambient_dim(), prefix),
                         basis.columns().topLeftCorner(rows, d));
}

BasisTruncation interleave(const BasisTruncation& b0, const BasisTruncation& b1) {
  const Index a0 = b0.ambient_dim(), a1 = b1.ambient_dim();
  SpaceDesc space = SpaceDesc::mixed(Exponent::sup(), {{b0.space(), a0}, {b1.space(), a1}});
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(a0 + a1, b0.size() + b1.size());
  Index k = 0;
  for (Index j = 0; j < std::max(b0.size(), b1.size()); ++j) {
    if (j < b0.size()) x.col(k++).head(a0) = b0.column(j);
    if (j < b1.size()) x.col(k++).tail(a1) = b1.column(j);
  }
  return BasisTruncation("interleave(" + b0.label() + "," + b1.label() + ")", std::move(space), std::move(x));
}

BlockPosition block_position(const std::vector<Index>& dims, Index k) {
  if (k < 0) throw std::out_of_range("negative block-sum index");
  Index offset = 0;
  for (std::size_t r = 0; r < dims.size(); ++r) {
    if (k < offset + dims[r]) return {r, k - offset};
    offset += dims[r];
  }
  throw std::out_of_range("index " + std::to_string(k) + " beyond block sum of size " + std::to_string(offset));
}

namespace {

Exponent outer_exponent(double p) {
  if (p == 0.0) return Exponent::sup();
  return Exponent::finite(p);
}

}  // namespace

BasisTruncation block_sum(const BasisTruncation& basis, const std::vector<Index>& dims, double p) {
  if (dims.empty()) throw std::invalid_argument("block sum needs at least one block");
  const Exponent outer = outer_exponent(p);
  std::vector<BasisTruncation> parts;
  std::vector<std::pair<SpaceDesc, Index>> blocks;
  Index rows = 0, cols = 0;
  for (Index d : dims) {
    if (d < 1) throw std::invalid_argument("block dims must be positive");
    if (d > basis.size())
      throw std::invalid_argument("block dim " + std::to_string(d) + " exceeds basis size " +
                                  std::to_string(basis.size()));
    parts.push_back(truncate(basis, d));
    blocks.emplace_back(parts.back().space(), parts.back().ambient_dim());
    rows += parts.back().ambient_dim();
    cols += d;
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, cols);
  Index r0 = 0, c0 = 0;
  for (const auto& part : parts) {
    x.block(r0, c0, part.ambient_dim(), part.size()) = part.columns();
    r0 += part.ambient_dim();
    c0 += part.size();
  }
  return BasisTruncation("blocksum(" + basis.label() + ",dims=" + dims_label(dims) +
                             ",p=" + detail::format_double(p) + ")",
                         SpaceDesc::mixed(outer, std::move(blocks)), std::move(x));
}

BasisTruncation pq_block_sum(const BasisTruncation& basis, const std::vector<PQBlock>& blocks, double p, double q) {
  if (blocks.empty()) throw std::invalid_argument("pq block sum needs at least one block");
  std::vector<std::pair<SpaceDesc, Index>> y_blocks, z_blocks;
  std::vector<Eigen::MatrixXd> y_images, z_images;
  std::vector<Index> dims;
  Index y_rows = 0, z_rows = 0, cols = 0;
  for (const auto& blk : blocks) {
    if (blk.dim < 1 || blk.dim > basis.size())
      throw std::invalid_argument("pq block dim " + std::to_string(blk.dim) + " outside 1.." +
                                  std::to_string(basis.size()));
    const BasisTruncation part = truncate(basis, blk.dim);
    const auto& [P, Q, ty, tz] = blk.maps;
    if ((P.rows() > 0 && P.cols() != part.ambient_dim()) || (Q.rows() > 0 && Q.cols() != part.ambient_dim()))
      throw std::invalid_argument("block maps expect " + std::to_string(P.cols()) + " ambient coordinates, block has " +
                                  std::to_string(part.ambient_dim()));
    Eigen::MatrixXd py = P.rows() > 0 ? Eigen::MatrixXd(P * part.columns()) : Eigen::MatrixXd(0, blk.dim);
    Eigen::MatrixXd qz = Q.rows() > 0 ? Eigen::MatrixXd(Q * part.columns()) : Eigen::MatrixXd(0, blk.dim);
    Eigen::MatrixXd stacked(py.rows() + qz.rows(), blk.dim);
    stacked << py, qz;
    if (rank_of(stacked) < blk.dim)
      throw std::invalid_argument("(P,Q) is rank deficient on block of dim " + std::to_string(blk.dim));
    if (py.rows() > 0) y_blocks.emplace_back(ty, py.rows());
    if (qz.rows() > 0) z_blocks.emplace_back(tz, qz.rows());
    y_rows += py.rows();
    z_rows += qz.rows();
    cols += blk.dim;
    dims.push_back(blk.dim);
    y_images.push_back(std::move(py));
    z_images.push_back(std::move(qz));
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(y_rows + z_rows, cols);
  Index yr = 0, zr = y_rows, c0 = 0;
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    x.block(yr, c0, y_images[n].rows(), dims[n]) = y_images[n];
    x.block(zr, c0, z_images[n].rows(), dims[n]) = z_images[n];
    yr += y_images[n].rows();
    zr += z_images[n].rows();
    c0 += dims[n];
  }

  std::optional<SpaceDesc> y_side, z_side;
  if (!y_blocks.empty()) y_side = SpaceDesc::mixed(outer_exponent(p), std::move(y_blocks));
  if (!z_blocks.empty()) z_side = SpaceDesc::mixed(outer_exponent(q), std::move(z_blocks));
  SpaceDesc space = y_side && z_side ? SpaceDesc::mixed(Exponent::sup(), {{*y_side, y_rows}, {*z_side, z_rows}})
                    : y_side        ? *y_side
                                    : *z_side;
  return BasisTruncation("pqsum(" + basis.label() + ",dims=" + dims_label(dims) + ",p=" + detail::format_double(p) +
                             ",q=" + detail::format_double(q) + ")",
                         std::move(space), std::move(x));
}

BlockMapPair half_split_maps(Index ambient_dim, const SpaceDesc& half_space) {
  const Index h = (ambient_dim + 1) / 2;
  BlockMapPair maps{Eigen::MatrixXd::Zero(h, ambient_dim), Eigen::MatrixXd::Zero(ambient_dim - h, ambient_dim),
                    half_space, half_space};
  maps.P.leftCols(h).setIdentity();
  maps.Q.rightCols(ambient_dim - h).setIdentity();
  return maps;
}

BlockMapPair canonical_product_projections(Index n) {
  if (n < 2 || n > 30) throw std::invalid_argument("canonical product projections need 2 <= n <= 30");
  const Index tail = (Index{1} << n) - n - 2;
  const Index total = n + tail;
  BlockMapPair maps{Eigen::MatrixXd::Zero(n, total), Eigen::MatrixXd::Zero(tail, total), SpaceDesc::lp_inf(),
                    SpaceDesc::lp(2)};
  maps.P.leftCols(n).setIdentity();
  if (tail > 0) maps.Q.rightCols(tail).setIdentity();
  return maps;
}

}  // namespace condgreedy
