#include "doctest.h"

#include <cmath>
#include <sstream>

#include "ckpf/grid_function.hpp"

using namespace ckpf;

TEST_SUITE_BEGIN("grid_function");

TEST_CASE("norms of an aligned indicator") {
  IntervalUnion half(Rational(1), {{Rational(0), Rational(1, 2)}});
  GridFunction g = GridFunction::indicator(half, 8);
  CHECK(g.norm_l1() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.norm_l2() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(g.norm_sup() == 1.0);
  for (std::size_t k = 0; k < 4; ++k) CHECK(g[k] == 1.0);
  for (std::size_t k = 4; k < 8; ++k) CHECK(g[k] == 0.0);
}

TEST_CASE("midpoint quadrature is exact on linear integrands") {
  GridFunction g = GridFunction::from_samples(Rational(1), 64, [](double x) { return 2.0 * x; });
  CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.norm_l1() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("indicator of an unaligned set uses midpoint membership") {
  IntervalUnion s(Rational(1), {{Rational(1, 3), Rational(2, 3)}});
  GridFunction g = GridFunction::indicator(s, 4);
  CHECK(g[0] == 0.0);  // midpoint 1/8
  CHECK(g[1] == 1.0);  // 3/8
  CHECK(g[2] == 1.0);  // 5/8
  CHECK(g[3] == 0.0);  // 7/8
}

TEST_CASE("integral over an interval union is exact in the cell lengths") {
  GridFunction ones(Rational(1), 7, 1.0);  // deliberately odd grid
  IntervalUnion s(Rational(1), {{Rational(1, 3), Rational(2, 3)}});
  CHECK(ones.integral_over(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  IntervalUnion empty(Rational(1));
  CHECK(ones.integral_over(empty) == 0.0);
  // additive over a disjoint split
  IntervalUnion a(Rational(1), {{Rational(0), Rational(1, 3)}});
  IntervalUnion b(Rational(1), {{Rational(1, 3), Rational(1)}});
  CHECK(ones.integral_over(a) + ones.integral_over(b) ==
        doctest::Approx(ones.integral()).epsilon(1e-15));
}

TEST_CASE("lookup respects the half-open cells and vanishes outside") {
  GridFunction g(Rational(1), 2);
  g[0] = 3.0;
  g[1] = 7.0;
  CHECK(g.lookup(0.49) == 3.0);
  CHECK(g.lookup(0.5) == 7.0);
  CHECK(g.lookup(-0.1) == 0.0);
  CHECK(g.lookup(1.0) == 0.0);
}

TEST_CASE("exact cell indexing") {
  GridFunction g(Rational(3), 6);
  CHECK(g.cell_index(Rational(0)) == 0);
  CHECK(g.cell_index(Rational(1, 2)) == 1);
  CHECK(g.cell_index(Rational(5, 2)) == 5);
  CHECK(g.midpoint_exact(1) == Rational(3, 4));
  CHECK_THROWS_AS(g.cell_index(Rational(3)), std::invalid_argument);
}

TEST_CASE("arithmetic guards grid compatibility") {
  GridFunction a(Rational(1), 4, 1.0), b(Rational(1), 8, 1.0), c(Rational(2), 4, 1.0);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a.inner(c), std::invalid_argument);
  GridFunction d = a * 2.0 - a;
  CHECK(d.norm_sup() == doctest::Approx(1.0));
}

TEST_CASE("sqrt clamps round-off and rejects genuine negatives") {
  GridFunction g(Rational(1), 2);
  g[0] = -5e-13;
  g[1] = 4.0;
  GridFunction s = g.sqrt_cellwise();
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 2.0);
  g[0] = -1e-6;
  CHECK_THROWS_AS(g.sqrt_cellwise(), std::invalid_argument);
}

TEST_CASE("rebin averages blocks and preserves mass") {
  GridFunction g(Rational(1), 4);
  g[0] = 1;
  g[1] = 2;
  g[2] = 3;
  g[3] = 4;
  GridFunction c = g.rebin(2);
  CHECK(c[0] == doctest::Approx(1.5));
  CHECK(c[1] == doctest::Approx(3.5));
  CHECK(c.integral() == doctest::Approx(g.integral()).epsilon(1e-15));
  CHECK_THROWS_AS(g.rebin(3), std::invalid_argument);
}

TEST_CASE("csv round trip") {
  GridFunction g = GridFunction::from_samples(Rational(2), 16, [](double x) { return std::sin(x); });
  std::ostringstream os;
  g.write_csv(os);
  std::istringstream is(os.str());
  GridFunction back = GridFunction::read_csv(is, Rational(2));
  REQUIRE(back.cells() == g.cells());
  for (std::size_t k = 0; k < g.cells(); ++k) CHECK(back[k] == g[k]);

  std::istringstream bad("nope\n1,2\n");
  CHECK_THROWS_AS(GridFunction::read_csv(bad, Rational(1)), std::invalid_argument);
}

TEST_CASE("seeded block functions are deterministic and block-constant") {
  GridFunction a = GridFunction::random_blocks(Rational(1), 64, 4, 123);
  GridFunction b = GridFunction::random_blocks(Rational(1), 64, 4, 123);
  GridFunction c = GridFunction::random_blocks(Rational(1), 64, 4, 124);
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(a[k] == b[k]);
    CHECK(a[k] >= -1.0);
    CHECK(a[k] <= 1.0);
    CHECK(a[k] == a[4 * (k / 4)]);
  }
  bool differs = false;
  for (std::size_t k = 0; k < 64; ++k) differs = differs || a[k] != c[k];
  CHECK(differs);
  CHECK_THROWS_AS(GridFunction::random_blocks(Rational(1), 64, 5, 1), std::invalid_argument);
}

TEST_SUITE_END();
