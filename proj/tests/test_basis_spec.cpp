#include "condgreedy/basis_spec.hpp"
#include "doctest.h"

using namespace condgreedy;

TEST_SUITE("basis_spec") {

TEST_CASE("ranges") {
  CHECK(parse_range("2..5") == std::vector<Index>{2, 3, 4, 5});
  CHECK(parse_range("2^1..2^4") == std::vector<Index>{2, 4, 8, 16});
  CHECK(parse_range("8,4,16,4") == std::vector<Index>{4, 8, 16});
  CHECK(parse_range("1..3, 2^3..2^4") == std::vector<Index>{1, 2, 3, 8, 16});
  CHECK(parse_range("7") == std::vector<Index>{7});
  CHECK_THROWS_AS(parse_range("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("a..b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range(""), std::invalid_argument);
}

TEST_CASE("families") {
  CHECK(parse_basis("lindenstrauss:32").columns() == lindenstrauss(32).columns());
  CHECK(parse_basis("summing:5").columns() == summing(5).columns());
  CHECK(parse_basis("difference:4").columns() == difference(4).columns());
  CHECK(to_string(parse_basis("unit:3").space()) == "lp:2");
  CHECK(to_string(parse_basis("unit(3,lp:inf)").space()) == "lp:inf");
  CHECK(to_string(parse_basis("unit(4,bv)").space()) == "bv");
}

TEST_CASE("combinators") {
  const auto b = parse_basis("blocksum(lindenstrauss,dims=2^1..2^6,p=1)");
  CHECK(b.size() == 126);
  CHECK(b.columns() == block_sum(lindenstrauss(64), {2, 4, 8, 16, 32, 64}, 1).columns());
  CHECK(parse_basis("blocksum(difference:8,dims=[2,4],p=inf)").size() == 6);
  const auto i = parse_basis("interleave(difference:8,unit(8,lp:2))");
  CHECK(i.columns() == interleave(difference(8), unit_vector_system(8, SpaceDesc::lp(2))).columns());
  CHECK(parse_basis("truncate(lindenstrauss:16,5)").size() == 5);
  CHECK(parse_basis("pqsplit(difference,dims=2^1..2^3,p=1,q=1)").size() == 14);
}

TEST_CASE("split") {
  const SpecCall c = split_spec("interleave(a:1,f(b,c))");
  CHECK(c.name == "interleave");
  CHECK(c.args == std::vector<std::string>{"a:1", "f(b,c)"});
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_basis("nope:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("lindenstrauss:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("lindenstrauss:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("interleave(difference:3)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("blocksum(difference:4,dims=2..8,p=1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("truncate(summing:3,4)"), std::invalid_argument);
}

}  // TEST_SUITE
