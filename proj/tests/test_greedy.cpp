#include <algorithm>
#include <cmath>

#include "condgreedy/greedy.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace condgreedy;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Greedy condition checked directly on the coefficients.
bool greedy_by_definition(const Eigen::VectorXd& a, const IndexSet& subset) {
  double in_min = INFINITY, out_max = 0.0;
  for (Index j = 0; j < a.size(); ++j) {
    const bool in = std::find(subset.begin(), subset.end(), j) != subset.end();
    if (in) in_min = std::min(in_min, std::abs(a[j]));
    else out_max = std::max(out_max, std::abs(a[j]));
  }
  return subset.empty() || in_min >= out_max;
}

/// ||f - S_A f|| / ||f|| from the oracle matrices.
double residual_ratio(const Eigen::MatrixXd& x, oracle::Norm n, const Witness& w) {
  Eigen::VectorXd rest = w.coeffs;
  for (Index j : w.subset) rest[j] = 0.0;
  return oracle::norm(n, x * rest) / oracle::norm(n, x * w.coeffs);
}

}  // namespace

TEST_SUITE("greedy") {

TEST_CASE("project") {
  const auto b = difference(3);
  CHECK(project(b, vec({1, 1, 1}), {}) == Eigen::VectorXd::Zero(3));
  CHECK(project(b, vec({1, 2, 3}), {0, 1, 2}) == b.synthesize(vec({1, 2, 3})));
  const Eigen::VectorXd p = project(b, vec({1, 1, 1}), {0, 2});
  CHECK(p == vec({1, -1, 1}));
  CHECK(b.norm_of(p) == 3.0);
  CHECK_THROWS_AS(project(b, vec({1, 1, 1}), {3}), std::out_of_range);
}

TEST_CASE("greedy sets") {
  CHECK(greedy_sets(vec({3, 1, 2}), 2, GreedyMode::Canonical).canonical == IndexSet{0, 2});
  const auto all = greedy_sets(vec({1, 1, 1}), 2, GreedyMode::All).all_sets;
  CHECK(all == std::vector<IndexSet>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(greedy_sets(vec({2, 2, 1}), 1, GreedyMode::All).all_sets == std::vector<IndexSet>{{0}, {1}});
  CHECK(greedy_sets(vec({-5, 1, 2}), 0, GreedyMode::All).all_sets == std::vector<IndexSet>{{}});
  CHECK(greedy_set_count(vec({1, 1, 1, 1, 3}), 3) == 6);
  CHECK_THROWS_AS(greedy_sets(vec({1, 2}), 3, GreedyMode::Canonical), std::invalid_argument);

  const Eigen::VectorXd a = vec({0.5, -2, 2, 0.5, 1, -0.5});
  for (Index m = 0; m <= 6; ++m) {
    const auto fam = greedy_sets(a, m, GreedyMode::All);
    CHECK(fam.all_sets.size() == greedy_set_count(a, m));
    for (const auto& s : fam.all_sets) {
      CHECK(static_cast<Index>(s.size()) == m);
      CHECK(greedy_by_definition(a, s));
      CHECK(is_greedy_set(a, s));
    }
  }
  CHECK_FALSE(is_greedy_set(a, {0}));
}

TEST_CASE("unconditional systems") {
  for (const auto& sp : {SpaceDesc::lp(1), SpaceDesc::lp(2), SpaceDesc::lp_inf()}) {
    const auto b = unit_vector_system(6, sp);
    CHECK(quasi_greedy_constant_lb(b, 8, 1).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(almost_greedy_constant_lb(b, 8, 1).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(democracy_ratio(b, 3, PhiMode::Exact) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quasi_greedy_constant_lb(lindenstrauss(4), 0, 1), std::invalid_argument);
}

TEST_CASE("quasi-greedy lower bounds dominate the sign-grid oracle") {
  const auto l = lindenstrauss(8);
  const Estimate el = quasi_greedy_constant_lb(l, 32, 1);
  CHECK(el.value >= oracle::quasi_greedy_sign_grid(oracle::lindenstrauss(8), oracle::Norm::L1) - 1e-12);
  CHECK(el.value >= 1.0);
  CHECK(el.value <= 3.0);
  CHECK(greedy_by_definition(el.witness.coeffs, el.witness.subset));
  CHECK(residual_ratio(oracle::lindenstrauss(8), oracle::Norm::L1, el.witness) == doctest::Approx(el.value).epsilon(1e-12));

  const auto s = summing(8);
  const Estimate es = quasi_greedy_constant_lb(s, 32, 1);
  CHECK(es.value >= oracle::quasi_greedy_sign_grid(oracle::summing(8), oracle::Norm::Sup) - 1e-12);
  CHECK(es.value >= 2.0);
  CHECK(greedy_by_definition(es.witness.coeffs, es.witness.subset));
  CHECK(residual_ratio(oracle::summing(8), oracle::Norm::Sup, es.witness) == doctest::Approx(es.value).epsilon(1e-12));
}

TEST_CASE("larger truncations use random magnitudes") {
  const auto b = lindenstrauss(20);
  const Estimate e = quasi_greedy_constant_lb(b, 16, 5);
  CHECK(e.value >= 1.0);
  CHECK(verify(b, e.witness));
  CHECK(is_greedy_set(e.witness.coeffs, e.witness.subset));
  CHECK(quasi_greedy_constant_lb(b, 32, 5).value >= e.value);
}

TEST_CASE("almost-greedy") {
  const auto l = lindenstrauss(8);
  const Estimate ag = almost_greedy_constant_lb(l, 32, 1);
  const Estimate qg = quasi_greedy_constant_lb(l, 32, 1);
  CHECK(std::isfinite(ag.value));
  CHECK(ag.value <= 2 * qg.value);
  CHECK(verify(l, ag.witness));
  CHECK(ag.witness.reference.size() <= ag.witness.subset.size());
}

TEST_CASE("fundamental function") {
  for (Index m = 1; m <= 5; ++m) {
    CHECK(fundamental_function(unit_vector_system(5, SpaceDesc::lp(1)), m, PhiMode::Exact) == doctest::Approx(m));
    CHECK(fundamental_function(unit_vector_system(5, SpaceDesc::lp_inf()), m, PhiMode::Exact) == 1.0);
  }
  const Eigen::MatrixXd x = oracle::lindenstrauss(12);
  double best = 0.0;
  for (Index m = 1; m <= 10; ++m) {
    const auto [hi, lo] = oracle::set_sum_extremes(x, oracle::Norm::L1, static_cast<int>(m));
    best = std::max(best, hi);
    const double phi = fundamental_function(lindenstrauss(12), m, PhiMode::Exact);
    CHECK(phi == doctest::Approx(best).epsilon(1e-12));
    CHECK(phi / static_cast<double>(m) >= 0.5);
    CHECK(phi / static_cast<double>(m) <= 2.0);
    const double dem = democracy_ratio(lindenstrauss(12), m, PhiMode::Exact);
    CHECK(dem == doctest::Approx(best / lo).epsilon(1e-12));
    CHECK(dem <= 4.0);
  }
  CHECK_THROWS_AS(fundamental_function(lindenstrauss(21), 3, PhiMode::Exact), std::domain_error);
  const double search = fundamental_function(lindenstrauss(32), 8, PhiMode::Search, 32, 1);
  CHECK(search <= 16.0 + 1e-12);
  CHECK(search >= fundamental_function(lindenstrauss(20), 8, PhiMode::Exact) - 1e-12);
}

TEST_CASE("interleaving l1 and l2 unit vectors is not democratic") {
  const auto b = interleave(unit_vector_system(3, SpaceDesc::lp(1)), unit_vector_system(3, SpaceDesc::lp(2)));
  CHECK(democracy_ratio(b, 2, PhiMode::Exact) > 1.0);
}

}  // TEST_SUITE
