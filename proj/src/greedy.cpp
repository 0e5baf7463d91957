#include "condgreedy/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "condgreedy/detail/kernel.hpp"
#include "condgreedy/rng.hpp"

namespace condgreedy {

namespace {

using detail::Kernel;

/// Indices of `a` grouped by equal magnitude, largest first; each group
/// ascending. Zero entries form the last group when `with_zeros`.
std::vector<IndexSet> tie_groups(const Eigen::VectorXd& a, bool with_zeros) {
  IndexSet order;
  for (Index j = 0; j < a.size(); ++j)
    if (with_zeros || a[j] != 0.0) order.push_back(j);
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return std::abs(a[x]) > std::abs(a[y]); });
  std::vector<IndexSet> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || std::abs(a[order[i]]) != std::abs(a[order[i - 1]])) groups.emplace_back();
    groups.back().push_back(order[i]);
  }
  return groups;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap / (n - k + i)) return cap;
    r = r * (n - k + i) / i;
  }
  return r;
}

void check_coeffs(const BasisTruncation& basis, const Eigen::VectorXd& a) {
  if (a.size() != basis.size())
    throw std::invalid_argument("expected " + std::to_string(basis.size()) + " coefficients, got " +
                                std::to_string(a.size()));
}

struct GreedyScan {
  // Best numerator per greedy-set size, with the set that attains it.
  std::vector<double> num;
  std::vector<IndexSet> arg;
  double fn = 0.0;
};

/// Walks every greedy set of the support (or a capped sample inside large
/// tie groups), recording ||f - S_A f|| for each size.
GreedyScan scan_greedy(const Kernel& k, const Eigen::VectorXd& a, std::uint64_t tie_cap) {
  GreedyScan out;
  Eigen::VectorXd r = k.synth(a);
  out.fn = k.norm(r);
  const auto groups = tie_groups(a, false);
  Index s = 0;
  for (const auto& g : groups) s += static_cast<Index>(g.size());
  out.num.assign(static_cast<std::size_t>(s + 1), -1.0);
  out.arg.assign(static_cast<std::size_t>(s + 1), {});
  out.num[0] = out.fn;
  IndexSet base;
  auto record = [&](const Eigen::VectorXd& v, const IndexSet& extra) {
    const std::size_t size = base.size() + extra.size();
    const double x = k.norm(v);
    if (x > out.num[size]) {
      out.num[size] = x;
      IndexSet set = base;
      set.insert(set.end(), extra.begin(), extra.end());
      std::sort(set.begin(), set.end());
      out.arg[size] = std::move(set);
    }
  };
  for (const auto& g : groups) {
    const std::size_t n = g.size();
    if (n < 63 && (std::uint64_t{1} << n) <= tie_cap) {
      std::vector<Eigen::VectorXd> buf(n + 1, r);
      IndexSet chosen;
      auto dfs = [&](auto&& self, std::size_t pos, std::size_t depth) -> void {
        if (pos == n) {
          if (depth > 0) record(buf[depth], chosen);
          return;
        }
        self(self, pos + 1, depth);
        buf[depth + 1] = buf[depth];
        k.add(buf[depth + 1], g[pos], -a[g[pos]]);
        chosen.push_back(g[pos]);
        self(self, pos + 1, depth + 1);
        chosen.pop_back();
      };
      dfs(dfs, 0, 0);
    } else {
      // prefixes in both index orders
      for (int dir = 0; dir < 2; ++dir) {
        Eigen::VectorXd v = r;
        IndexSet chosen;
        for (std::size_t i = 0; i < n; ++i) {
          const Index j = dir == 0 ? g[i] : g[n - 1 - i];
          k.add(v, j, -a[j]);
          chosen.push_back(j);
          record(v, chosen);
        }
      }
    }
    for (Index j : g) k.add(r, j, -a[j]);
    base.insert(base.end(), g.begin(), g.end());
  }
  return out;
}

struct Scored {
  double ratio = -1.0;
  IndexSet subset;
  IndexSet reference;
};

Scored score_quasi(const Kernel& k, const Eigen::VectorXd& a, const GreedySearchOptions& opts) {
  const GreedyScan g = scan_greedy(k, a, opts.tie_group_cap);
  Scored best;
  if (g.fn <= 0.0) return best;
  for (std::size_t i = 0; i < g.num.size(); ++i)
    if (g.num[i] >= 0.0 && g.num[i] / g.fn > best.ratio) {
      best.ratio = g.num[i] / g.fn;
      best.subset = g.arg[i];
    }
  return best;
}

/// den[k] = min ||f - S_B f|| over |B| <= k, B inside the support.
std::pair<std::vector<double>, std::vector<IndexSet>> min_residuals(const Kernel& k, const Eigen::VectorXd& a,
                                                                    Index exhaustive_dim) {
  IndexSet support;
  for (Index j = 0; j < k.cols(); ++j)
    if (a[j] != 0.0) support.push_back(j);
  const std::size_t s = support.size();
  std::vector<double> den(s + 1, std::numeric_limits<double>::infinity());
  std::vector<IndexSet> arg(s + 1);
  const Eigen::VectorXd f = k.synth(a);
  if (static_cast<Index>(s) <= exhaustive_dim) {
    std::vector<Eigen::VectorXd> buf(s + 1, f);
    IndexSet chosen;
    auto dfs = [&](auto&& self, std::size_t pos, std::size_t depth) -> void {
      if (pos == s) {
        const double x = k.norm(buf[depth]);
        if (x < den[depth]) {
          den[depth] = x;
          arg[depth] = chosen;
        }
        return;
      }
      self(self, pos + 1, depth);
      buf[depth + 1] = buf[depth];
      k.add(buf[depth + 1], support[pos], -a[support[pos]]);
      chosen.push_back(support[pos]);
      self(self, pos + 1, depth + 1);
      chosen.pop_back();
    };
    dfs(dfs, 0, 0);
  } else {
    // forward selection: remove the term that shrinks the residual most
    Eigen::VectorXd r = f;
    IndexSet chosen;
    std::vector<char> used(static_cast<std::size_t>(k.cols()), 0);
    den[0] = k.norm(r);
    for (std::size_t size = 1; size <= s; ++size) {
      Index pick = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index j : support) {
        if (used[static_cast<std::size_t>(j)]) continue;
        Eigen::VectorXd v = r;
        k.add(v, j, -a[j]);
        const double x = k.norm(v);
        if (x < best) {
          best = x;
          pick = j;
        }
      }
      if (pick < 0) break;
      used[static_cast<std::size_t>(pick)] = 1;
      k.add(r, pick, -a[pick]);
      chosen.push_back(pick);
      den[size] = best;
      arg[size] = chosen;
      std::sort(arg[size].begin(), arg[size].end());
    }
  }
  for (std::size_t i = 1; i <= s; ++i)
    if (den[i - 1] <= den[i]) {
      den[i] = den[i - 1];
      arg[i] = arg[i - 1];
    }
  return {den, arg};
}

Scored score_almost(const Kernel& k, const Eigen::VectorXd& a, const GreedySearchOptions& opts) {
  const GreedyScan g = scan_greedy(k, a, opts.tie_group_cap);
  Scored best;
  if (g.fn <= 0.0) return best;
  const auto [den, ref] = min_residuals(k, a, opts.exhaustive_denominator_dim);
  for (std::size_t i = 0; i < g.num.size(); ++i) {
    if (g.num[i] < 0.0) continue;
    double r;
    if (den[i] < 1e-12)
      r = g.num[i] < 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
    else
      r = g.num[i] / den[i];
    if (r > best.ratio) {
      best.ratio = r;
      best.subset = g.arg[i];
      best.reference = ref[i];
    }
  }
  return best;
}

template <typename Score>
struct GreedySearch {
  const Kernel& k;
  const GreedySearchOptions& opts;
  Score score;

  struct Point {
    Eigen::VectorXd a;
    Scored s;
    Method method = Method::Random;
  };

  // First-improvement sweeps over the multiplicative moves x2, x1/2, and a
  // sign flip.
  void ascend(Point& p) const {
    if (std::isinf(p.s.ratio)) return;
    for (std::size_t sweep = 0; sweep < opts.max_ascent_sweeps; ++sweep) {
      bool moved = false;
      for (Index i = 0; i < p.a.size(); ++i) {
        if (p.a[i] == 0.0) continue;
        for (double factor : {2.0, 0.5, -1.0}) {
          Eigen::VectorXd b = p.a;
          b[i] *= factor;
          Scored t = score(k, b, opts);
          if (t.ratio >= p.s.ratio + 1e-10) {
            p.a = std::move(b);
            p.s = std::move(t);
            moved = true;
            if (std::isinf(p.s.ratio)) return;
            break;
          }
        }
      }
      if (!moved) break;
    }
  }

  Point run(std::uint64_t budget, std::uint64_t seed, Stream stream) const {
    const Index d = k.cols();
    Point best;
    auto keep = [&](Point& p) {
      if (p.s.ratio > best.s.ratio) best = std::move(p);
    };
    if (d <= opts.grid_max_dim) {
      std::uint64_t total = 1;
      for (Index j = 0; j < d; ++j) total *= 3;
      std::vector<std::pair<double, std::uint64_t>> ranked;
      for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        while (c % 3 == 0) c /= 3;
        if (c % 3 != 1) continue;
        Point p{decode(code, d), {}, Method::Oracle};
        p.s = score(k, p.a, opts);
        ranked.emplace_back(-p.s.ratio, code);
        keep(p);
      }
      std::sort(ranked.begin(), ranked.end());
      const std::size_t starts = std::min(ranked.size(), opts.ascent_starts);
      std::vector<Point> climbed(starts);
      detail::parallel_for(starts, [&](std::size_t i) {
        climbed[i] = Point{decode(ranked[i].second, d), {}, Method::Oracle};
        climbed[i].s = score(k, climbed[i].a, opts);
        ascend(climbed[i]);
      });
      for (auto& p : climbed) keep(p);
    }
    std::vector<Point> sampled(static_cast<std::size_t>(budget));
    detail::parallel_for(sampled.size(), [&](std::size_t i) {
      CounterRng rng(seed, {static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(d), i});
      Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
      for (Index j = 0; j < d; ++j) {
        if (rng.below(8) == 0) continue;
        a[j] = (rng.below(2) ? 1.0 : -1.0) * (0.05 + 0.95 * rng.uniform());
      }
      if (a.isZero()) a[static_cast<Index>(rng.below(static_cast<std::uint64_t>(d)))] = 1.0;
      sampled[i] = Point{std::move(a), {}, Method::Random};
      sampled[i].s = score(k, sampled[i].a, opts);
      ascend(sampled[i]);
    });
    for (auto& p : sampled) keep(p);
    return best;
  }

  static Eigen::VectorXd decode(std::uint64_t code, Index d) {
    Eigen::VectorXd a(d);
    for (Index j = 0; j < d; ++j, code /= 3) a[j] = code % 3 == 0 ? 0.0 : code % 3 == 1 ? 1.0 : -1.0;
    return a;
  }
};

template <typename Score>
Estimate greedy_estimate(const BasisTruncation& basis, std::uint64_t budget, std::uint64_t seed,
                         const GreedySearchOptions& opts, Score score, WitnessKind kind, Stream stream) {
  if (budget == 0) throw std::invalid_argument("budget must be at least 1");
  const Kernel k(basis, basis.size());
  const GreedySearch<Score> search{k, opts, score};
  auto p = search.run(budget, seed, stream);
  Witness w;
  w.coeffs = p.a;
  w.subset = p.s.subset;
  w.reference = p.s.reference;
  w.kind = kind;
  w.method = p.method;
  w.ratio = recompute_ratio(basis, w);
  return {w.ratio, std::move(w)};
}

/// Exhaustive over subsets of {0..d-1}: max norm over |A| <= m and min
/// norm over |A| = m of sum x_j.
std::pair<double, double> set_extremes(const Kernel& k, Index m) {
  const Index d = k.cols();
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> buf(static_cast<std::size_t>(m + 1), k.zero());
  auto dfs = [&](auto&& self, Index pos, Index depth) -> void {
    const double x = k.norm(buf[static_cast<std::size_t>(depth)]);
    hi = std::max(hi, x);
    if (depth == m) {
      lo = std::min(lo, x);
      return;
    }
    for (Index j = pos; j < d; ++j) {
      buf[static_cast<std::size_t>(depth + 1)] = buf[static_cast<std::size_t>(depth)];
      k.add(buf[static_cast<std::size_t>(depth + 1)], j, 1.0);
      self(self, j + 1, depth + 1);
    }
  };
  dfs(dfs, 0, 0);
  return {hi, lo};
}

/// Swap descent (sign = -1) or ascent (sign = +1) on ||sum_{j in A} x_j||
/// with |A| = m fixed, from a seeded random start.
double swap_search(const Kernel& k, Index m, double sign, std::uint64_t seed, std::uint64_t i) {
  const Index d = k.cols();
  CounterRng rng(seed, {static_cast<std::uint64_t>(Stream::Fundamental), static_cast<std::uint64_t>(m), i,
                        sign > 0 ? 1u : 0u});
  std::vector<Index> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index j = d - 1; j > 0; --j)
    std::swap(perm[static_cast<std::size_t>(j)], perm[rng.below(static_cast<std::uint64_t>(j + 1))]);
  std::vector<char> in(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd v = k.zero();
  for (Index j = 0; j < m; ++j) {
    in[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = 1;
    k.add(v, perm[static_cast<std::size_t>(j)], 1.0);
  }
  double value = k.norm(v);
  for (Index iter = 0; iter < 4 * d; ++iter) {
    double best = value;
    Index out_j = -1, in_j = -1;
    for (Index o = 0; o < d; ++o) {
      if (!in[static_cast<std::size_t>(o)]) continue;
      Eigen::VectorXd w = v;
      k.add(w, o, -1.0);
      for (Index n = 0; n < d; ++n) {
        if (in[static_cast<std::size_t>(n)]) continue;
        Eigen::VectorXd u = w;
        k.add(u, n, 1.0);
        const double x = k.norm(u);
        if (sign * (x - best) > 1e-12) {
          best = x;
          out_j = o;
          in_j = n;
        }
      }
    }
    if (out_j < 0) break;
    in[static_cast<std::size_t>(out_j)] = 0;
    in[static_cast<std::size_t>(in_j)] = 1;
    k.add(v, out_j, -1.0);
    k.add(v, in_j, 1.0);
    value = k.norm(v);
  }
  return value;
}

void check_m(const BasisTruncation& basis, Index m) {
  if (m < 1 || m > basis.size())
    throw std::invalid_argument("m = " + std::to_string(m) + " outside 1.." + std::to_string(basis.size()));
}

void check_exact(const BasisTruncation& basis) {
  if (basis.size() > kExactSetGuard)
    throw std::domain_error("exact enumeration refused: d = " + std::to_string(basis.size()) + " exceeds " +
                            std::to_string(kExactSetGuard));
}

double phi_search(const Kernel& k, Index m, std::uint64_t budget, std::uint64_t seed) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k.cols());
  double best = detail::best_subset(k, ones, m, 0).value;
  for (std::uint64_t i = 0; i < budget; ++i) best = std::max(best, swap_search(k, m, 1.0, seed, i));
  return best;
}

}  // namespace

Eigen::VectorXd project(const BasisTruncation& basis, const Eigen::VectorXd& coeffs, const IndexSet& subset) {
  check_coeffs(basis, coeffs);
  return basis.synthesize(restrict_coeffs(coeffs, subset));
}

GreedySetFamily greedy_sets(const Eigen::VectorXd& coeffs, Index m, GreedyMode mode) {
  if (m < 0 || m > coeffs.size())
    throw std::invalid_argument("greedy set size " + std::to_string(m) + " outside 0.." + std::to_string(coeffs.size()));
  GreedySetFamily out{coeffs, m, {}, {}};
  const auto groups = tie_groups(coeffs, true);
  IndexSet base;
  std::size_t g = 0;
  while (g < groups.size() && static_cast<Index>(base.size() + groups[g].size()) <= m) {
    base.insert(base.end(), groups[g].begin(), groups[g].end());
    ++g;
  }
  const std::size_t need = static_cast<std::size_t>(m) - base.size();
  out.canonical = base;
  if (need > 0) out.canonical.insert(out.canonical.end(), groups[g].begin(), groups[g].begin() + static_cast<long>(need));
  std::sort(out.canonical.begin(), out.canonical.end());
  if (mode == GreedyMode::Canonical) return out;

  if (need == 0) {
    out.all_sets.push_back(out.canonical);
    return out;
  }
  if (greedy_set_count(coeffs, m) > (std::uint64_t{1} << 20)) throw std::invalid_argument("too many greedy sets to list");
  const IndexSet& tie = groups[g];
  std::vector<char> pick(tie.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(need), 1);
  do {
    IndexSet s = base;
    for (std::size_t i = 0; i < tie.size(); ++i)
      if (pick[i]) s.push_back(tie[i]);
    std::sort(s.begin(), s.end());
    out.all_sets.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(out.all_sets.begin(), out.all_sets.end());
  return out;
}

bool is_greedy_set(const Eigen::VectorXd& coeffs, const IndexSet& subset) {
  std::vector<char> in(static_cast<std::size_t>(coeffs.size()), 0);
  for (Index j : subset) {
    if (j < 0 || j >= coeffs.size()) throw std::out_of_range("index outside the coefficient vector");
    in[static_cast<std::size_t>(j)] = 1;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index j = 0; j < coeffs.size(); ++j) {
    if (in[static_cast<std::size_t>(j)])
      lo = std::min(lo, std::abs(coeffs[j]));
    else
      hi = std::max(hi, std::abs(coeffs[j]));
  }
  return lo >= hi;
}

std::uint64_t greedy_set_count(const Eigen::VectorXd& coeffs, Index m) {
  if (m < 0 || m > coeffs.size()) return 0;
  const auto groups = tie_groups(coeffs, true);
  std::size_t taken = 0;
  for (const auto& g : groups) {
    if (taken + g.size() > static_cast<std::size_t>(m))
      return binomial_saturating(g.size(), static_cast<std::size_t>(m) - taken);
    taken += g.size();
  }
  return 1;
}

Estimate quasi_greedy_constant_lb(const BasisTruncation& basis, std::uint64_t budget, std::uint64_t seed,
                                  const GreedySearchOptions& opts) {
  return greedy_estimate(basis, budget, seed, opts, score_quasi, WitnessKind::QuasiGreedy, Stream::QuasiGreedy);
}

Estimate almost_greedy_constant_lb(const BasisTruncation& basis, std::uint64_t budget, std::uint64_t seed,
                                   const GreedySearchOptions& opts) {
  return greedy_estimate(basis, budget, seed, opts, score_almost, WitnessKind::AlmostGreedy, Stream::AlmostGreedy);
}

double fundamental_function(const BasisTruncation& basis, Index m, PhiMode mode, std::uint64_t budget,
                            std::uint64_t seed) {
  check_m(basis, m);
  const Kernel k(basis, basis.size());
  if (mode == PhiMode::Exact) {
    check_exact(basis);
    return set_extremes(k, m).first;
  }
  return phi_search(k, m, budget, seed);
}

double democracy_ratio(const BasisTruncation& basis, Index m, PhiMode mode, std::uint64_t budget,
                       std::uint64_t seed) {
  check_m(basis, m);
  const Kernel k(basis, basis.size());
  if (mode == PhiMode::Exact) {
    check_exact(basis);
    const auto [hi, lo] = set_extremes(k, m);
    return hi / lo;
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(budget, 1); ++i) lo = std::min(lo, swap_search(k, m, -1.0, seed, i));
  return phi_search(k, m, budget, seed) / lo;
}

}  // namespace condgreedy
