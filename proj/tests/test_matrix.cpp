#include "doctest.h"

#include "ckpf/zero_one_matrix.hpp"

using namespace ckpf;

namespace {

// brute-force oracle: scan columns up to a bound that contains every
// declared support
std::vector<std::size_t> scan_matching(const ZeroOneMatrix& m, const std::vector<std::size_t>& u,
                                       const std::vector<std::size_t>& v, std::size_t bound) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j <= bound; ++j)
    if (m.column_matches(u, v, j)) out.push_back(j);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("zero_one_matrix");

TEST_CASE("entries by kind") {
  auto ones = ZeroOneMatrix::full_ones(4);
  CHECK(ones.entry(3, 7) == 1);
  CHECK(ones.entry(100, 1000) == 1);

  auto stair = ZeroOneMatrix::staircase(8);
  // row i carries ones exactly on 1..ceil(i/2)
  CHECK(stair.entry(2, 2) == 0);
  CHECK(stair.entry(5, 3) == 1);
  CHECK(stair.entry(1, 1) == 1);
  CHECK(stair.entry(3, 2) == 1);
  CHECK(stair.entry(3, 3) == 0);

  auto blk = ZeroOneMatrix::explicit_block({{1, 1}, {1, 0}}, 2);
  CHECK(blk.entry(1, 2) == 1);
  CHECK(blk.entry(2, 2) == 0);
  CHECK(blk.entry(2, 5) == 0);  // beyond the block defaults to 0
  CHECK(blk.entry(9, 1) == 0);

  auto sup = ZeroOneMatrix::row_supports({{1, {1, 3}}, {2, {2}}}, 2);
  CHECK(sup.entry(1, 3) == 1);
  CHECK(sup.entry(1, 2) == 0);
  CHECK(sup.entry(2, 2) == 1);

  CHECK_THROWS_AS(ones.entry(0, 1), std::invalid_argument);
}

TEST_CASE("instantiated rows must not be identically zero") {
  CHECK_THROWS_AS(ZeroOneMatrix::explicit_block({{1, 0}, {0, 0}}, 2), ZeroRowError);
  CHECK_NOTHROW(ZeroOneMatrix::explicit_block({{1, 0}, {0, 0}}, 1));
  CHECK_THROWS_AS(ZeroOneMatrix::explicit_block({{1}}, 3), ZeroRowError);  // rows 2,3 are zero
  CHECK_THROWS_AS(ZeroOneMatrix::row_supports({{1, {}}}, 1), ZeroRowError);
}

TEST_CASE("column_matches") {
  auto ones = ZeroOneMatrix::full_ones(4);
  CHECK(ones.column_matches({1}, {2}, 5) == 0);   // the (1 - A(2,j)) factor kills it
  CHECK(ones.column_matches({1, 2}, {}, 9) == 1); // all factors are 1
  CHECK(ones.column_matches({}, {}, 3) == 1);     // empty product

  auto stair = ZeroOneMatrix::staircase(8);
  CHECK(stair.column_matches({3}, {1}, 2) == 1);
  CHECK(stair.column_matches({3}, {1}, 1) == 0);
}

TEST_CASE("singleton products reduce to entries (exhaustive to 100)") {
  auto stair = ZeroOneMatrix::staircase(8);
  auto ones = ZeroOneMatrix::full_ones(4);
  for (std::size_t u = 1; u <= 8; ++u)
    for (std::size_t j = 1; j <= 100; ++j) {
      CHECK(stair.column_matches({u}, {}, j) == stair.entry(u, j));
      CHECK(ones.column_matches({u}, {}, j) == ones.entry(u, j));
    }
}

TEST_CASE("column_matches is monotone in the ones-set") {
  auto stair = ZeroOneMatrix::staircase(12);
  for (std::size_t u = 1; u <= 6; ++u)
    for (std::size_t extra = 1; extra <= 6; ++extra)
      for (std::size_t j = 1; j <= 12; ++j)
        CHECK(stair.column_matches({u, extra}, {}, j) <= stair.column_matches({u}, {}, j));
}

TEST_CASE("matching_columns: finite answers match the brute-force scan") {
  auto blk = ZeroOneMatrix::explicit_block({{1, 1}, {1, 0}}, 2);
  auto m = blk.matching_columns({2}, {});
  REQUIRE(m.has_value());
  CHECK(*m == std::vector<std::size_t>{1});
  CHECK(*m == scan_matching(blk, {2}, {}, 100));

  auto stair = ZeroOneMatrix::staircase(10);
  for (std::size_t i = 1; i <= 10; ++i)
    for (std::size_t j = 1; j <= 10; ++j) {
      auto got = stair.matching_columns({i}, {j});
      REQUIRE(got.has_value());
      CHECK(*got == scan_matching(stair, {i}, {j}, 64));
    }
}

TEST_CASE("matching_columns: exact reasoning for the all-ones matrix") {
  auto ones = ZeroOneMatrix::full_ones(4);
  auto empty = ones.matching_columns({1}, {2});
  REQUIRE(empty.has_value());
  CHECK(empty->empty());
  CHECK_FALSE(ones.matching_columns({1}, {}).has_value());  // all columns match
  CHECK_FALSE(ones.matching_columns({}, {}).has_value());
}

TEST_CASE("matching_columns stays conservative for co-finite sets") {
  auto stair = ZeroOneMatrix::staircase(6);
  CHECK_FALSE(stair.matching_columns({}, {1}).has_value());
}

TEST_SUITE_END();
