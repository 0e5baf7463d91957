#include "condgreedy/detail/kernel.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace condgreedy::detail {

Kernel::Kernel(const BasisTruncation& basis, Index cols) : space_(basis.space()), cols_(cols) {
  if (cols < 1 || cols > basis.size()) throw std::invalid_argument("kernel column count out of range");
  std::vector<Index> row_map(static_cast<std::size_t>(basis.ambient_dim()), -1);
  if (space_.is_lattice()) {
    std::vector<char> used(static_cast<std::size_t>(basis.ambient_dim()), 0);
    for (Index j = 0; j < cols; ++j)
      for (Index r : basis.column_support(j)) used[static_cast<std::size_t>(r)] = 1;
    std::vector<Index> rows;
    for (Index r = 0; r < basis.ambient_dim(); ++r)
      if (used[static_cast<std::size_t>(r)]) {
        row_map[static_cast<std::size_t>(r)] = static_cast<Index>(rows.size());
        rows.push_back(r);
      }
    space_ = restrict_rows(space_, basis.ambient_dim(), rows);
    rows_ = static_cast<Index>(rows.size());
  } else {
    std::iota(row_map.begin(), row_map.end(), Index{0});
    rows_ = basis.ambient_dim();
  }
  entries_.resize(static_cast<std::size_t>(cols));
  for (Index j = 0; j < cols; ++j)
    for (Index r : basis.column_support(j))
      entries_[static_cast<std::size_t>(j)].emplace_back(row_map[static_cast<std::size_t>(r)], basis.columns()(r, j));
}

Eigen::VectorXd Kernel::synth(const Eigen::VectorXd& a) const {
  Eigen::VectorXd v = zero();
  for (Index j = 0; j < cols_; ++j)
    if (a[j] != 0.0) add(v, j, a[j]);
  return v;
}

Eigen::VectorXd Kernel::synth(const Eigen::VectorXd& a, const IndexSet& subset) const {
  Eigen::VectorXd v = zero();
  for (Index j : subset)
    if (a[j] != 0.0) add(v, j, a[j]);
  return v;
}

bool Kernel::disjoint_lattice() const {
  if (!space_.is_lattice()) return false;
  std::vector<char> seen(static_cast<std::size_t>(rows_), 0);
  for (const auto& col : entries_)
    for (const auto& [r, x] : col) {
      if (seen[static_cast<std::size_t>(r)]) return false;
      seen[static_cast<std::size_t>(r)] = 1;
    }
  return true;
}

std::uint64_t bounded_subset_count(Index s, Index limit) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t total = 0, binom = 1;
  for (Index i = 0; i <= std::min(s, limit); ++i) {
    total += binom;
    if (total >= cap) return cap;
    // C(s, i+1) = C(s, i) * (s - i) / (i + 1), exact in this order
    if (binom > cap / static_cast<std::uint64_t>(std::max<Index>(1, s - i))) return cap;
    binom = binom * static_cast<std::uint64_t>(s - i) / static_cast<std::uint64_t>(i + 1);
  }
  return total;
}

namespace {

struct SubsetDfs {
  const Kernel& k;
  const Eigen::VectorXd& a;
  const std::vector<Index>& support;
  Index limit;
  std::vector<Eigen::VectorXd> buffers;
  std::vector<Index> chosen;
  SubsetChoice best;

  void run(std::size_t pos, Index depth) {
    if (pos == support.size()) {
      const double v = k.norm(buffers[static_cast<std::size_t>(depth)]);
      if (v > best.value) {
        best.value = v;
        best.subset.assign(chosen.begin(), chosen.end());
      }
      return;
    }
    run(pos + 1, depth);
    if (depth < limit) {
      const Index j = support[pos];
      auto& next = buffers[static_cast<std::size_t>(depth + 1)];
      next = buffers[static_cast<std::size_t>(depth)];
      k.add(next, j, a[j]);
      chosen.push_back(j);
      run(pos + 1, depth + 1);
      chosen.pop_back();
    }
  }
};

double eval_set(const Kernel& k, const Eigen::VectorXd& a, const std::vector<char>& in, const std::vector<Index>& support) {
  Eigen::VectorXd v = k.zero();
  for (Index j : support)
    if (in[static_cast<std::size_t>(j)]) k.add(v, j, a[j]);
  return k.norm(v);
}

// Steepest flip/swap ascent on membership, starting from `start`.
SubsetChoice refine(const Kernel& k, const Eigen::VectorXd& a, const std::vector<Index>& support, Index limit,
                    std::vector<Index> start) {
  std::vector<char> in(static_cast<std::size_t>(k.cols()), 0);
  if (static_cast<Index>(start.size()) > limit) start.resize(static_cast<std::size_t>(limit));
  for (Index j : start) in[static_cast<std::size_t>(j)] = 1;
  Index size = static_cast<Index>(start.size());
  Eigen::VectorXd v = k.zero();
  for (Index j : start) k.add(v, j, a[j]);
  double value = k.norm(v);
  const bool swaps = support.size() <= 48;
  for (std::size_t iter = 0; iter < 4 * support.size() + 8; ++iter) {
    double best = value;
    Index add_j = -1, drop_j = -1;
    for (Index j : support) {
      const bool member = in[static_cast<std::size_t>(j)];
      if (!member && size >= limit) continue;
      Eigen::VectorXd w = v;
      k.add(w, j, member ? -a[j] : a[j]);
      const double x = k.norm(w);
      if (x > best + 1e-12) {
        best = x;
        (member ? drop_j : add_j) = j;
        (member ? add_j : drop_j) = -1;
      }
    }
    if (swaps && size >= limit && add_j < 0 && drop_j < 0) {
      for (Index out : support) {
        if (!in[static_cast<std::size_t>(out)]) continue;
        Eigen::VectorXd w = v;
        k.add(w, out, -a[out]);
        for (Index inj : support) {
          if (in[static_cast<std::size_t>(inj)]) continue;
          Eigen::VectorXd u = w;
          k.add(u, inj, a[inj]);
          const double x = k.norm(u);
          if (x > best + 1e-12) {
            best = x;
            add_j = inj;
            drop_j = out;
          }
        }
      }
    }
    if (add_j < 0 && drop_j < 0) break;
    if (drop_j >= 0) {
      in[static_cast<std::size_t>(drop_j)] = 0;
      k.add(v, drop_j, -a[drop_j]);
      --size;
    }
    if (add_j >= 0) {
      in[static_cast<std::size_t>(add_j)] = 1;
      k.add(v, add_j, a[add_j]);
      ++size;
    }
    value = k.norm(v);
  }
  SubsetChoice out;
  for (Index j : support)
    if (in[static_cast<std::size_t>(j)]) out.subset.push_back(j);
  out.value = eval_set(k, a, in, support);
  return out;
}

}  // namespace

SubsetChoice best_subset(const Kernel& k, const Eigen::VectorXd& a, Index limit, std::uint64_t exhaustive_cap,
                         const IndexSet* hint) {
  std::vector<Index> support;
  for (Index j = 0; j < k.cols(); ++j)
    if (a[j] != 0.0) support.push_back(j);
  limit = std::min<Index>(limit, static_cast<Index>(support.size()));
  if (bounded_subset_count(static_cast<Index>(support.size()), limit) <= exhaustive_cap) {
    SubsetDfs dfs{k, a, support, limit, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(limit + 1), k.zero()), {}, {}};
    dfs.chosen.reserve(static_cast<std::size_t>(limit));
    dfs.best.value = -1.0;
    dfs.run(0, 0);
    return dfs.best;
  }

  std::vector<std::vector<Index>> starts;
  if (hint) starts.push_back(*hint);
  std::vector<Index> positive, negative, even, odd;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index j = support[i];
    (a[j] > 0 ? positive : negative).push_back(j);
    (i % 2 == 0 ? even : odd).push_back(j);
  }
  for (auto* s : {&positive, &negative, &even, &odd, &support}) starts.push_back(*s);
  {
    // forward greedy: keep adding the column that raises the norm most
    std::vector<Index> chosen;
    std::vector<char> in(static_cast<std::size_t>(k.cols()), 0);
    Eigen::VectorXd v = k.zero();
    double value = 0.0;
    while (static_cast<Index>(chosen.size()) < limit) {
      Index pick = -1;
      double best = value;
      for (Index j : support) {
        if (in[static_cast<std::size_t>(j)]) continue;
        Eigen::VectorXd w = v;
        k.add(w, j, a[j]);
        const double x = k.norm(w);
        if (x > best + 1e-12) {
          best = x;
          pick = j;
        }
      }
      if (pick < 0) break;
      in[static_cast<std::size_t>(pick)] = 1;
      k.add(v, pick, a[pick]);
      chosen.push_back(pick);
      value = best;
    }
    starts.push_back(chosen);
  }
  SubsetChoice best;
  best.value = -1.0;
  for (auto& s : starts) {
    SubsetChoice c = refine(k, a, support, limit, s);
    if (c.value > best.value) best = std::move(c);
  }
  return best;
}

SubsetChoice improve_subset(const Kernel& k, const Eigen::VectorXd& a, Index limit, const IndexSet& start) {
  std::vector<Index> support;
  for (Index j = 0; j < k.cols(); ++j)
    if (a[j] != 0.0) support.push_back(j);
  std::vector<Index> s;
  for (Index j : start)
    if (a[j] != 0.0) s.push_back(j);
  return refine(k, a, support, limit, std::move(s));
}

unsigned thread_count() {
  if (const char* env = std::getenv("CONDGREEDY_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace condgreedy::detail
