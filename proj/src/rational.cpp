#include "ckpf/rational.hpp"

#include <cmath>

namespace ckpf {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_int(text)) throw std::invalid_argument("Rational: expected integer or p/q, got '" + text + "'");
    return Rational(mpq_class(mpz_class(text)));
  }
  std::string p = text.substr(0, slash), q = text.substr(slash + 1);
  if (!is_int(p) || !is_int(q))
    throw std::invalid_argument("Rational: expected integer or p/q, got '" + text + "'");
  mpz_class den(q);
  if (den == 0) throw std::invalid_argument("Rational: zero denominator in '" + text + "'");
  mpq_class r(mpz_class(p), den);
  r.canonicalize();
  return Rational(r);
}

std::int64_t Rational::num_i64() const {
  mpz_class n = q_.get_num();
  if (!n.fits_slong_p()) throw std::overflow_error("Rational numerator exceeds int64");
  return static_cast<std::int64_t>(n.get_si());
}

std::int64_t Rational::den_i64() const {
  mpz_class d = q_.get_den();
  if (!d.fits_slong_p()) throw std::overflow_error("Rational denominator exceeds int64");
  return static_cast<std::int64_t>(d.get_si());
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::int64_t Rational::floor_i64() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  if (!f.fits_slong_p()) throw std::overflow_error("Rational floor exceeds int64");
  return static_cast<std::int64_t>(f.get_si());
}

Rational round_to_dyadic(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("round_to_dyadic: nonfinite input");
  mpq_class exact(x);  // doubles are dyadic rationals, this is exact
  mpz_class scale = 1;
  mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
  mpq_class scaled = exact * mpq_class(scale);
  // round to nearest integer, ties away from zero
  mpz_class twice_num = scaled.get_num() * 2;
  mpz_class den = scaled.get_den() * 2;
  mpz_class shifted = twice_num + (sgn(scaled) >= 0 ? scaled.get_den() : -scaled.get_den());
  mpz_class rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), shifted.get_mpz_t(), den.get_mpz_t());
  if (sgn(scaled) < 0) {
    // floor-based rounding is toward -inf; re-derive via negation for symmetry
    mpq_class neg = -scaled;
    mpz_class shifted_n = neg.get_num() * 2 + neg.get_den();
    mpz_class rounded_n;
    mpz_fdiv_q(rounded_n.get_mpz_t(), shifted_n.get_mpz_t(), mpz_class(neg.get_den() * 2).get_mpz_t());
    rounded = -rounded_n;
  }
  mpq_class out(rounded, scale);
  out.canonicalize();
  return Rational(out);
}

Rational pow2(int exponent) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(mpq_class(p));
  mpq_class r(1, 1);
  r /= p;
  return Rational(r);
}

}  // namespace ckpf
