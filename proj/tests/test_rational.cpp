#include "doctest.h"

#include <random>

#include "ckpf/rational.hpp"

using namespace ckpf;

TEST_SUITE_BEGIN("rational");

TEST_CASE("construction and canonical form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("parse") {
  CHECK(Rational::parse("3/8") == Rational(3, 8));
  CHECK(Rational::parse("-3/8") == Rational(-3, 8));
  CHECK(Rational::parse("17") == Rational(17));
  CHECK_THROWS_AS(Rational::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
}

TEST_CASE("arithmetic agrees with long-double reference on random small values") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  for (int k = 0; k < 500; ++k) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    long double ad = a.num_i64() / static_cast<long double>(a.den_i64());
    long double bd = b.num_i64() / static_cast<long double>(b.den_i64());
    CHECK((a + b).to_double() == doctest::Approx(static_cast<double>(ad + bd)));
    CHECK((a - b).to_double() == doctest::Approx(static_cast<double>(ad - bd)));
    CHECK((a * b).to_double() == doctest::Approx(static_cast<double>(ad * bd)));
    if (!b.is_zero()) CHECK((a / b).to_double() == doctest::Approx(static_cast<double>(ad / bd)));
    CHECK((a < b) == (ad < bd));
  }
}

TEST_CASE("arbitrary precision survives repeated products") {
  Rational x(1, 3);
  for (int k = 0; k < 50; ++k) x = x * Rational(1, 3);
  Rational y = x;
  for (int k = 0; k < 51; ++k) y = y * Rational(3);
  CHECK(y == Rational(1));  // 3^51 overflows int64; exactness must survive
}

TEST_CASE("floor") {
  CHECK(Rational(7, 2).floor_i64() == 3);
  CHECK(Rational(-7, 2).floor_i64() == -4);
  CHECK(Rational(8, 2).floor_i64() == 4);
}

TEST_CASE("dyadic rounding") {
  // 1/3 at 4 bits: 16/3 = 5.33 rounds to 5 -> 5/16
  CHECK(round_to_dyadic(1.0 / 3.0, 4) == Rational(5, 16));
  CHECK(round_to_dyadic(0.5, 40) == Rational(1, 2));
  CHECK(round_to_dyadic(-1.0 / 3.0, 4) == Rational(-5, 16));
  // error bound 2^-(bits+1)
  for (double v : {0.1234, 0.9999, 2.718281828}) {
    Rational r = round_to_dyadic(v, 20);
    CHECK(std::abs(r.to_double() - v) <= std::ldexp(1.0, -21) + 1e-15);
  }
}

TEST_CASE("pow2") {
  CHECK(pow2(0) == Rational(1));
  CHECK(pow2(5) == Rational(32));
  CHECK(pow2(-3) == Rational(1, 8));
}

TEST_SUITE_END();
