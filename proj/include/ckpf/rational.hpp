#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace ckpf {

/// Exact rational number. Thin value wrapper around GMP's mpq_class so the
/// interval set algebra and all a.e.-equality checks are exact, never
/// tolerance-based. Immutable in spirit: all operators return new values.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long num) : q_(num) {}
  Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "p/q" or a bare integer. Whitespace is not accepted.
  static Rational parse(const std::string& text);

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  /// Numerator/denominator as int64, throwing when they do not fit.
  std::int64_t num_i64() const;
  std::int64_t den_i64() const;

  double to_double() const { return q_.get_d(); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_negative() const { return sgn(q_) < 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  std::string str() const;

  Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    return Rational(mpq_class(q_ / o.q_));
  }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  bool operator==(const Rational& o) const { return q_ == o.q_; }
  bool operator!=(const Rational& o) const { return q_ != o.q_; }
  bool operator<(const Rational& o) const { return q_ < o.q_; }
  bool operator<=(const Rational& o) const { return q_ <= o.q_; }
  bool operator>(const Rational& o) const { return q_ > o.q_; }
  bool operator>=(const Rational& o) const { return q_ >= o.q_; }

  Rational abs() const { return is_negative() ? -*this : *this; }

  /// floor(*this), as a plain integer. Throws when it does not fit in int64.
  std::int64_t floor_i64() const;

 private:
  mpq_class q_;
};

/// Nearest rational with denominator 2^bits. Ties round away from zero.
/// Used to store irrational interval endpoints (quadratic preimages) with a
/// recorded error bound of 2^-(bits+1).
Rational round_to_dyadic(double x, unsigned bits);

/// Power of two as a Rational, exponent may be negative.
Rational pow2(int exponent);

}  // namespace ckpf
