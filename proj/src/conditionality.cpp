#include "condgreedy/conditionality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "condgreedy/detail/kernel.hpp"
#include "condgreedy/rng.hpp"

namespace condgreedy {

namespace {

using detail::Kernel;

struct Candidate {
  Eigen::VectorXd a;  // length kernel.cols()
  IndexSet subset;
  double ratio = -1.0;
  Method method = Method::Random;
};

/// Maximize ||S_A f|| / ||f|| over a supported in the kernel's columns and
/// |A| <= limit.
struct Problem {
  const Kernel& k;
  Index limit;
  const SearchOptions& opts;

  bool exhaustive(Index support) const {
    return detail::bounded_subset_count(support, limit) <= opts.exhaustive_subset_cap;
  }

  double ratio(const Eigen::VectorXd& a, const IndexSet& subset) const {
    const double fn = k.norm(k.synth(a));
    return fn > 0.0 ? k.norm(k.synth(a, subset)) / fn : -1.0;
  }

  Candidate with_best_subset(Eigen::VectorXd a, Method method, const IndexSet* hint = nullptr) const {
    const double fn = k.norm(k.synth(a));
    Candidate c{std::move(a), {}, -1.0, method};
    if (fn <= 0.0) return c;
    auto choice = detail::best_subset(k, c.a, limit, opts.exhaustive_subset_cap, hint);
    c.subset = std::move(choice.subset);
    c.ratio = choice.value / fn;
    return c;
  }

  // Only for phase two: exhaustive where affordable, one refinement otherwise.
  detail::SubsetChoice resubset(const Eigen::VectorXd& a, const IndexSet& hint) const {
    Index s = 0;
    for (Index j = 0; j < a.size(); ++j) s += a[j] != 0.0;
    if (exhaustive(s)) return detail::best_subset(k, a, limit, opts.exhaustive_subset_cap);
    return detail::improve_subset(k, a, limit, hint);
  }

  // Coordinate moves: double, halve, negate, drop; revive a zero at the
  // largest or smallest live magnitude.
  std::vector<double> moves(const Eigen::VectorXd& a, Index i, Index support) const {
    std::vector<double> out;
    const double x = a[i];
    if (x != 0.0) {
      out = {2 * x, x / 2, -x};
      if (support > 1) out.push_back(0.0);
    } else {
      double hi = 0.0, lo = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < a.size(); ++j)
        if (a[j] != 0.0) {
          hi = std::max(hi, std::abs(a[j]));
          lo = std::min(lo, std::abs(a[j]));
        }
      if (hi == 0.0) return {1.0};
      out = {hi, -hi};
      if (lo != hi) out.insert(out.end(), {lo, -lo});
    }
    return out;
  }

  static void rescale(Eigen::VectorXd& a) {
    const double hi = a.cwiseAbs().maxCoeff();
    if (hi == 0.0) return;
    a *= std::ldexp(1.0, -std::ilogb(hi));
  }

  // Steepest ascent alternating a fixed-subset coordinate phase with a full
  // neighbourhood phase that re-optimizes the subset for every move.
  void ascend(Candidate& c) const {
    if (c.ratio < 0.0) return;
    const Index n = k.cols();
    for (std::size_t step = 0; step < opts.max_ascent_steps; ++step) {
      Index support = 0;
      for (Index j = 0; j < n; ++j) support += c.a[j] != 0.0;
      std::vector<char> in(static_cast<std::size_t>(n), 0);
      for (Index j : c.subset) in[static_cast<std::size_t>(j)] = 1;
      const Eigen::VectorXd f = k.synth(c.a);
      const Eigen::VectorXd s = k.synth(c.a, c.subset);

      double best = c.ratio + opts.min_gain;
      Index best_i = -1;
      double best_x = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (double x : moves(c.a, i, support)) {
          const double delta = x - c.a[i];
          Eigen::VectorXd f2 = f;
          k.add(f2, i, delta);
          const double fn = k.norm(f2);
          if (fn <= 0.0) continue;
          double r;
          if (in[static_cast<std::size_t>(i)]) {
            Eigen::VectorXd s2 = s;
            k.add(s2, i, delta);
            r = k.norm(s2) / fn;
          } else {
            r = k.norm(s) / fn;
          }
          if (r >= best) {
            best = r;
            best_i = i;
            best_x = x;
          }
        }
      }
      if (best_i >= 0) {
        c.a[best_i] = best_x;
        if (best_x == 0.0) std::erase(c.subset, best_i);
        c.ratio = ratio(c.a, c.subset);
        auto again = resubset(c.a, c.subset);
        const double fn = k.norm(k.synth(c.a));
        if (again.value / fn > c.ratio) {
          c.subset = std::move(again.subset);
          c.ratio = again.value / fn;
        }
        rescale(c.a);
        c.ratio = ratio(c.a, c.subset);
        continue;
      }

      best = c.ratio + opts.min_gain;
      best_i = -1;
      IndexSet best_subset;
      for (Index i = 0; i < n; ++i) {
        for (double x : moves(c.a, i, support)) {
          Eigen::VectorXd a2 = c.a;
          a2[i] = x;
          const double fn = k.norm(k.synth(a2));
          if (fn <= 0.0) continue;
          IndexSet hint = c.subset;
          if (x == 0.0) std::erase(hint, i);
          auto choice = resubset(a2, hint);
          const double r = choice.value / fn;
          if (r >= best) {
            best = r;
            best_i = i;
            best_x = x;
            best_subset = std::move(choice.subset);
          }
        }
      }
      if (best_i < 0) break;
      c.a[best_i] = best_x;
      c.subset = std::move(best_subset);
      rescale(c.a);
      c.ratio = ratio(c.a, c.subset);
    }
  }
};

bool better(const Candidate& x, const Candidate& best) { return x.ratio > best.ratio; }

Witness finish(const BasisTruncation& basis, const Candidate& c) {
  Witness w;
  w.coeffs = Eigen::VectorXd::Zero(basis.size());
  w.coeffs.head(c.a.size()) = c.a;
  w.subset = c.subset;
  w.kind = WitnessKind::Conditionality;
  w.method = c.method;
  w.ratio = recompute_ratio(basis, w);
  return w;
}

Estimate certificate(const BasisTruncation& basis) {
  Witness w;
  w.coeffs = Eigen::VectorXd::Zero(basis.size());
  w.coeffs[0] = 1.0;
  w.subset = {0};
  w.kind = WitnessKind::Conditionality;
  w.method = Method::Oracle;
  w.ratio = recompute_ratio(basis, w);
  return {w.ratio, std::move(w)};
}

void check_m(const BasisTruncation& basis, Index m) {
  if (m < 1 || m > basis.size())
    throw std::invalid_argument("m = " + std::to_string(m) + " outside 1.." + std::to_string(basis.size()));
}

struct Ranked {
  double ratio;
  std::uint64_t code;
  std::uint64_t tie;  // scrambled code; equal ratios are common on flat grids
};

Eigen::VectorXd decode_grid(std::uint64_t code, Index n) {
  Eigen::VectorXd a(n);
  for (Index j = 0; j < n; ++j) {
    const auto digit = code % 3;
    code /= 3;
    a[j] = digit == 0 ? 0.0 : digit == 1 ? 1.0 : -1.0;
  }
  return a;
}

bool canonical_sign(std::uint64_t code) {
  while (code % 3 == 0) {
    if (code == 0) return false;
    code /= 3;
  }
  return code % 3 == 1;
}

/// Full sign grid over the kernel columns, then ascent from the best
/// `ascent_starts` points.
Candidate grid_search(const Problem& P) {
  const Index n = P.k.cols();
  std::uint64_t total = 1;
  for (Index j = 0; j < n; ++j) total *= 3;
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, 256));
  const std::size_t keep = std::max<std::size_t>(1, P.opts.ascent_starts);
  auto order = [](const Ranked& x, const Ranked& y) {
    return x.ratio > y.ratio || (x.ratio == y.ratio && (x.tie < y.tie || (x.tie == y.tie && x.code < y.code)));
  };

  std::vector<std::vector<Ranked>> local(chunks);
  detail::parallel_for(chunks, [&](std::size_t c) {
    auto& top = local[c];
    const std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
    for (std::uint64_t code = lo; code < hi; ++code) {
      if (!canonical_sign(code)) continue;
      const Eigen::VectorXd a = decode_grid(code, n);
      const double fn = P.k.norm(P.k.synth(a));
      if (fn <= 0.0) continue;
      const double r = detail::best_subset(P.k, a, P.limit, P.opts.exhaustive_subset_cap).value / fn;
      const Ranked item{r, code, CounterRng(code, {}).next()};
      if (top.size() < keep || order(item, top.back())) {
        top.insert(std::upper_bound(top.begin(), top.end(), item, order), item);
        if (top.size() > keep) top.pop_back();
      }
    }
  });
  std::vector<Ranked> merged;
  for (auto& t : local) merged.insert(merged.end(), t.begin(), t.end());
  std::sort(merged.begin(), merged.end(), order);
  if (merged.size() > keep) merged.resize(keep);

  std::vector<Candidate> climbed(merged.size());
  detail::parallel_for(merged.size(), [&](std::size_t i) {
    climbed[i] = P.with_best_subset(decode_grid(merged[i].code, n), Method::Oracle);
    P.ascend(climbed[i]);
  });
  Candidate best;
  for (auto& c : climbed)
    if (better(c, best)) best = std::move(c);
  return best;
}

Eigen::VectorXd random_coeffs(std::uint64_t seed, Stream stream, Index m, std::uint64_t i, Index n) {
  CounterRng rng(seed, {static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(m), i});
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    if (rng.below(4) == 0) continue;
    const double sign = rng.below(2) ? 1.0 : -1.0;
    a[j] = sign * std::ldexp(1.0, -static_cast<int>(rng.below(4)));
  }
  if (a.isZero()) a[static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))] = 1.0;
  return a;
}

Candidate random_search(const Problem& P, std::uint64_t budget, std::uint64_t seed, Stream stream, Index m) {
  std::vector<Candidate> out(static_cast<std::size_t>(budget));
  detail::parallel_for(out.size(), [&](std::size_t i) {
    out[i] = P.with_best_subset(random_coeffs(seed, stream, m, i, P.k.cols()), Method::Random);
    P.ascend(out[i]);
  });
  Candidate best;
  for (auto& c : out)
    if (better(c, best)) best = std::move(c);
  return best;
}

std::vector<Index> level_sizes(Index m) {
  // level l holds 1-based positions 2^l .. 2^{l+1}-1, cut at m
  std::vector<Index> levels;
  for (Index start = 1; start <= m; start *= 2) levels.push_back(std::min(2 * start - 1, m) - start + 1);
  return levels;
}

/// Pattern and candidate subsets of one family on the first m positions.
void family_patterns(Index m, TemplateFamily family, std::vector<std::pair<Eigen::VectorXd, std::vector<IndexSet>>>& out) {
  switch (family) {
    case TemplateFamily::AlternatingParity: {
      IndexSet odd, even;
      for (Index j = 0; j < m; ++j) (j % 2 == 0 ? odd : even).push_back(j);
      out.push_back({Eigen::VectorXd::Ones(m), {odd, even}});
      break;
    }
    case TemplateFamily::AlternatingSign: {
      Eigen::VectorXd a(m);
      IndexSet pos, neg;
      for (Index j = 0; j < m; ++j) {
        a[j] = j % 2 == 0 ? 1.0 : -1.0;
        (j % 2 == 0 ? pos : neg).push_back(j);
      }
      out.push_back({a, {pos, neg}});
      a[m - 1] /= 2;
      out.push_back({a, {pos, neg}});
      break;
    }
    case TemplateFamily::DyadicLevels: {
      const auto sizes = level_sizes(m);
      if (sizes.size() > 16) throw std::invalid_argument("too many dyadic levels");
      Eigen::VectorXd a(m);
      std::vector<IndexSet> level_members(sizes.size());
      Index j = 0;
      for (std::size_t l = 0; l < sizes.size(); ++l)
        for (Index t = 0; t < sizes[l]; ++t, ++j) {
          a[j] = std::ldexp(1.0, -static_cast<int>(l));
          level_members[l].push_back(j);
        }
      std::vector<IndexSet> subsets;
      for (std::uint32_t mask = 1; mask < (1u << sizes.size()); ++mask) {
        IndexSet s;
        for (std::size_t l = 0; l < sizes.size(); ++l)
          if (mask >> l & 1u) s.insert(s.end(), level_members[l].begin(), level_members[l].end());
        subsets.push_back(std::move(s));
      }
      out.push_back({a, std::move(subsets)});
      break;
    }
  }
}

/// Best (pattern, subset) of a family on m positions, with subsets capped
/// at `limit` by refinement when they are too large.
Candidate family_candidate(const Problem& P, Index m, TemplateFamily family) {
  std::vector<std::pair<Eigen::VectorXd, std::vector<IndexSet>>> patterns;
  family_patterns(m, family, patterns);
  Candidate best;
  for (auto& [pattern, subsets] : patterns) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(P.k.cols());
    a.head(m) = pattern;
    for (const auto& s : subsets) {
      Candidate c{a, s, -1.0, Method::Template};
      if (static_cast<Index>(s.size()) > P.limit) c.subset = detail::improve_subset(P.k, a, P.limit, s).subset;
      c.ratio = P.ratio(c.a, c.subset);
      if (better(c, best)) best = std::move(c);
    }
  }
  return best;
}

Candidate from_witness(const Problem& P, const Witness& w) {
  if (w.coeffs.size() < P.k.cols()) throw std::invalid_argument("seed witness shorter than the search space");
  for (Index j = P.k.cols(); j < w.coeffs.size(); ++j)
    if (w.coeffs[j] != 0.0) throw std::invalid_argument("seed witness reaches beyond the search support");
  Candidate c{w.coeffs.head(P.k.cols()), w.subset, -1.0, w.method};
  if (static_cast<Index>(c.subset.size()) > P.limit) c.subset = detail::improve_subset(P.k, c.a, P.limit, c.subset).subset;
  c.ratio = P.ratio(c.a, c.subset);
  return c;
}

Candidate run_templates(const Problem& P, Index m, const TemplateSet& templates) {
  std::vector<Candidate> starts;
  for (auto family : templates.families) starts.push_back(family_candidate(P, m, family));
  for (const auto& w : templates.seeds) starts.push_back(from_witness(P, w));
  std::vector<Candidate> climbed(starts.size());
  detail::parallel_for(starts.size(), [&](std::size_t i) {
    Candidate c = starts[i];
    P.ascend(c);
    climbed[i] = c.ratio > starts[i].ratio ? std::move(c) : starts[i];
  });
  Candidate best;
  for (auto& c : climbed)
    if (better(c, best)) best = std::move(c);
  return best;
}

}  // namespace

std::uint64_t grid_size(Index m) {
  std::uint64_t t = 1;
  for (Index j = 0; j < m; ++j) t *= 3;
  return (t - 1) / 2;
}

Witness template_witness(const BasisTruncation& basis, Index m, TemplateFamily family) {
  check_m(basis, m);
  const Kernel k(basis, m);
  const SearchOptions opts;
  const Problem P{k, m, opts};
  return finish(basis, family_candidate(P, m, family));
}

Estimate L_m_oracle(const BasisTruncation& basis, Index m, const SearchOptions& opts) {
  check_m(basis, m);
  const Kernel k(basis, m);
  if (k.disjoint_lattice()) return certificate(basis);
  if (m > opts.oracle_guard)
    throw std::domain_error("oracle refused: m = " + std::to_string(m) + " exceeds the guard " +
                            std::to_string(opts.oracle_guard));
  const Problem P{k, m, opts};
  Witness w = finish(basis, grid_search(P));
  return {w.ratio, std::move(w)};
}

Estimate L_m_estimate(const BasisTruncation& basis, Index m, std::uint64_t budget, std::uint64_t seed,
                      const TemplateSet& templates, const SearchOptions& opts) {
  check_m(basis, m);
  const Kernel k(basis, m);
  if (k.disjoint_lattice()) return certificate(basis);
  const Problem P{k, m, opts};
  Candidate best = run_templates(P, m, templates);
  if (m <= opts.oracle_guard && budget >= grid_size(m)) {
    Candidate g = grid_search(P);
    if (better(g, best)) best = std::move(g);
  }
  if (budget > 0) {
    Candidate r = random_search(P, budget, seed, Stream::LmRandom, m);
    if (better(r, best)) best = std::move(r);
  }
  Witness w = finish(basis, best);
  return {w.ratio, std::move(w)};
}

Estimate k_m_estimate(const BasisTruncation& basis, Index m, std::uint64_t budget, std::uint64_t seed,
                      const SearchOptions& opts) {
  check_m(basis, m);
  const Index d = basis.size();
  const Kernel k(basis, d);
  if (k.disjoint_lattice()) return certificate(basis);
  const Problem P{k, m, opts};

  TemplateSet seeds = TemplateSet::none();
  seeds.seeds.push_back(L_m_estimate(basis, m, budget, seed, TemplateSet{}, opts).witness);
  Candidate best = run_templates(P, m, seeds);
  TemplateSet families;
  for (Index s = m; ; s = std::min(2 * s, d)) {
    Candidate c = run_templates(P, s, families);
    if (better(c, best)) best = std::move(c);
    if (s == d) break;
  }
  if (d <= opts.oracle_guard && budget >= grid_size(d)) {
    Candidate g = grid_search(P);
    if (better(g, best)) best = std::move(g);
  }
  if (budget > 0) {
    Candidate r = random_search(P, budget, seed, Stream::KmRandom, m);
    if (better(r, best)) best = std::move(r);
  }
  Witness w = finish(basis, best);
  return {w.ratio, std::move(w)};
}

}  // namespace condgreedy
