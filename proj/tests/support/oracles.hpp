#pragma once

// Reference values computed without the library: the matrices are built
// here from their coordinate formulas and the suprema are taken over the
// vertices of the unit ball, which is exact for polyhedral norms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

enum class Norm { L1, Sup };

inline double norm(Norm n, const Eigen::VectorXd& v) { return n == Norm::L1 ? v.lpNorm<1>() : v.lpNorm<Eigen::Infinity>(); }

inline Eigen::MatrixXd lindenstrauss(int d) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * d + 1, d);
  for (int j = 1; j <= d; ++j) {
    x(j - 1, j - 1) = 1.0;
    x(2 * j - 1, j - 1) = -0.5;
    x(2 * j, j - 1) = -0.5;
  }
  return x;
}

inline Eigen::MatrixXd summing(int d) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) x.col(j).head(j + 1).setOnes();
  return x;
}

inline Eigen::MatrixXd difference(int d) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(d, d);
  for (int j = 1; j < d; ++j) x(j - 1, j) = -1.0;
  return x;
}

/// Block diagonal placement, as in an l1-sum of l1 blocks.
inline Eigen::MatrixXd block_diagonal(const std::vector<Eigen::MatrixXd>& blocks) {
  int rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += static_cast<int>(b.rows());
    cols += static_cast<int>(b.cols());
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, cols);
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    x.block(r, c, b.rows(), b.cols()) = b;
    r += static_cast<int>(b.rows());
    c += static_cast<int>(b.cols());
  }
  return x;
}

inline void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Extreme directions of {a : ||X a|| <= 1}, up to sign and scale. For l1
/// these are the 1-dimensional kernels of m-1 independent rows; for sup the
/// points where m independent rows are at +-1.
inline std::vector<Eigen::VectorXd> vertices(const Eigen::MatrixXd& x, Norm n) {
  const int rows = static_cast<int>(x.rows()), m = static_cast<int>(x.cols());
  std::vector<Eigen::VectorXd> out;
  if (m == 1) {
    out.push_back(Eigen::VectorXd::Ones(1));
    return out;
  }
  if (n == Norm::L1) {
    for_each_combination(rows, m - 1, [&](const std::vector<int>& r) {
      Eigen::MatrixXd sub(m - 1, m);
      for (int i = 0; i < m - 1; ++i) sub.row(i) = x.row(r[static_cast<std::size_t>(i)]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      lu.setThreshold(1e-10);
      if (lu.rank() != m - 1) return;
      out.push_back(lu.kernel().col(0));
    });
  } else {
    for_each_combination(rows, m, [&](const std::vector<int>& r) {
      Eigen::MatrixXd sub(m, m);
      for (int i = 0; i < m; ++i) sub.row(i) = x.row(r[static_cast<std::size_t>(i)]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      for (std::uint32_t s = 0; s < (1u << m); ++s) {
        Eigen::VectorXd sigma(m);
        for (int i = 0; i < m; ++i) sigma[i] = (s >> i) & 1u ? 1.0 : -1.0;
        const Eigen::VectorXd a = lu.solve(sigma);
        if ((x * a).lpNorm<Eigen::Infinity>() <= 1.0 + 1e-9) out.push_back(a);
      }
    });
  }
  return out;
}

/// sup ||S_A f|| / ||f|| over f in the span of the first m columns.
inline double conditionality(const Eigen::MatrixXd& x_all, Norm n, int m) {
  const Eigen::MatrixXd x = x_all.leftCols(m);
  double best = 0.0;
  for (const auto& a : vertices(x, n)) {
    const double den = norm(n, x * a);
    if (den <= 1e-14) continue;
    for (std::uint32_t s = 1; s < (1u << m); ++s) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(x.rows());
      for (int j = 0; j < m; ++j)
        if ((s >> j) & 1u) v += a[j] * x.col(j);
      best = std::max(best, norm(n, v) / den);
    }
  }
  return best;
}

/// max ||f - S_A f|| / ||f|| over f with coefficients in {-1,0,1}^d and
/// every greedy set A of f.
inline double quasi_greedy_sign_grid(const Eigen::MatrixXd& x, Norm n) {
  const int d = static_cast<int>(x.cols());
  double best = 0.0;
  std::vector<int> a(static_cast<std::size_t>(d), -1);
  std::uint64_t total = 1;
  for (int j = 0; j < d; ++j) total *= 3;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    Eigen::VectorXd coeffs(d);
    for (int j = 0; j < d; ++j, c /= 3) coeffs[j] = static_cast<double>(c % 3) - 1.0;
    const double den = norm(n, x * coeffs);
    std::vector<int> nz, z;
    for (int j = 0; j < d; ++j) (coeffs[j] != 0.0 ? nz : z).push_back(j);
    // greedy sets: any subset of the nonzeros, or all nonzeros plus zeros
    const int k = static_cast<int>(nz.size());
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
      Eigen::VectorXd rest = coeffs;
      for (int i = 0; i < k; ++i)
        if ((s >> i) & 1u) rest[nz[static_cast<std::size_t>(i)]] = 0.0;
      best = std::max(best, norm(n, x * rest) / den);
    }
  }
  return best;
}

/// max and min of ||sum_{j in A} x_j|| over |A| = m.
inline std::pair<double, double> set_sum_extremes(const Eigen::MatrixXd& x, Norm n, int m) {
  double hi = 0.0, lo = INFINITY;
  for_each_combination(static_cast<int>(x.cols()), m, [&](const std::vector<int>& idx) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(x.rows());
    for (int j : idx) v += x.col(j);
    const double t = norm(n, v);
    hi = std::max(hi, t);
    lo = std::min(lo, t);
  });
  return {hi, lo};
}

}  // namespace oracle
