#include <cmath>

#include "condgreedy/witness.hpp"
#include "doctest.h"

using namespace condgreedy;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_SUITE("witness") {

TEST_CASE("conditionality ratio by hand") {
  // e1 - e2 + e3 over f = e3
  const auto b = difference(3);
  Witness w{vec({1, 1, 1}), {0, 2}, 3.0, WitnessKind::Conditionality, Method::Template, {}};
  CHECK(recompute_ratio(b, w) == 3.0);
  CHECK(verify(b, w));
  w.ratio = 3.1;
  CHECK_FALSE(verify(b, w));
}

TEST_CASE("quasi-greedy and almost-greedy ratios") {
  const auto b = difference(3);
  // f = e3, f - S_{1} f = e3 - e1
  Witness q{vec({1, 1, 1}), {0}, 2.0, WitnessKind::QuasiGreedy, Method::Oracle, {}};
  CHECK(recompute_ratio(b, q) == 2.0);
  // f - S_{1} f = e3 - e1, f - S_{3} f = e2
  Witness a{vec({1, 1, 1}), {0}, 2.0, WitnessKind::AlmostGreedy, Method::Oracle, {2}};
  CHECK(recompute_ratio(b, a) == 2.0);
  // vanishing denominator with a nonzero numerator
  Witness inf{vec({0, 0, 1}), {0}, INFINITY, WitnessKind::AlmostGreedy, Method::Oracle, {2}};
  CHECK(std::isinf(recompute_ratio(b, inf)));
}

TEST_CASE("scaling invariance") {
  const auto b = lindenstrauss(6);
  Witness w{vec({1, 0.5, 0.5, 0.25, -1, 0}), {0, 3}, 0.0, WitnessKind::Conditionality, Method::Random, {}};
  const double r = recompute_ratio(b, w);
  for (double c : {1e-3, 0.5, 3.0, 1024.0}) {
    Witness s = w;
    s.coeffs *= c;
    CHECK(std::abs(recompute_ratio(b, s) - r) <= 1e-12 * r);
  }
}

TEST_CASE("zero coefficient vector is rejected") {
  Witness w{Eigen::VectorXd::Zero(3), {0}, 0.0, WitnessKind::Conditionality, Method::Random, {}};
  CHECK_THROWS(recompute_ratio(difference(3), w));
}

TEST_CASE("remap and helpers") {
  Witness w{vec({1, 2}), {1}, 1.0, WitnessKind::AlmostGreedy, Method::Oracle, {0}};
  const Witness r = remap(w, {0, 2}, 4);
  CHECK(r.coeffs == vec({1, 0, 2, 0}));
  CHECK(r.subset == IndexSet{2});
  CHECK(r.reference == IndexSet{0});
  CHECK(restrict_coeffs(vec({1, 2, 3}), {0, 2}) == vec({1, 0, 3}));
  CHECK(support_extent(vec({0, 1, 0, 0})) == 2);
  CHECK(support_extent(Eigen::VectorXd::Zero(3)) == 0);
}

TEST_CASE("enum text") {
  for (Method m : {Method::Oracle, Method::Template, Method::Random}) CHECK(parse_method(to_string(m)) == m);
  for (WitnessKind k : {WitnessKind::Conditionality, WitnessKind::QuasiGreedy, WitnessKind::AlmostGreedy})
    CHECK(parse_witness_kind(to_string(k)) == k);
  CHECK(to_string(Method::Template) == "template");
  CHECK_THROWS_AS(parse_method("guess"), std::invalid_argument);
}

}  // TEST_SUITE
