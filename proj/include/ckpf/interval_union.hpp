#pragma once

#include <utility>
#include <vector>

#include "ckpf/rational.hpp"

namespace ckpf {

/// Finite union of disjoint half-open intervals [a,b) with exact rational
/// endpoints, kept in canonical form: sorted, pairwise disjoint, adjacent
/// pieces merged, zero-length pieces dropped. All pieces live inside the
/// ambient [0, L). Because the representation is canonical, two unions are
/// equal up to null sets exactly when they compare equal.
///
/// Interval sets in this library model measurable sets up to Lebesgue-null
/// differences, so the half-open convention is a normalization, not a
/// restriction.
class IntervalUnion {
 public:
  struct Piece {
    Rational lo, hi;  // [lo, hi), lo < hi
    bool operator==(const Piece&) const = default;
  };

  /// Empty set in ambient [0, ambient).
  explicit IntervalUnion(Rational ambient);

  /// Canonicalizing constructor. Pieces may overlap or touch and arrive in
  /// any order; zero-length pieces are dropped. Throws std::invalid_argument
  /// when a piece has lo > hi or extends outside [0, ambient).
  IntervalUnion(Rational ambient, std::vector<std::pair<Rational, Rational>> pieces);

  static IntervalUnion whole(Rational ambient) {
    return IntervalUnion(ambient, {{Rational(0), ambient}});
  }

  const Rational& ambient() const { return ambient_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  Rational measure() const;

  bool contains(const Rational& x) const;  // half-open membership

  IntervalUnion unite(const IntervalUnion& other) const;
  IntervalUnion intersect(const IntervalUnion& other) const;
  IntervalUnion difference(const IntervalUnion& other) const;
  IntervalUnion complement() const;  // within [0, ambient)

  /// Exact a.e.-equality: measure of the symmetric difference is zero, which
  /// for canonical forms is plain equality.
  bool ae_equal(const IntervalUnion& other) const;

  Rational symmetric_difference_measure(const IntervalUnion& other) const;

  bool operator==(const IntervalUnion& other) const {
    return ambient_ == other.ambient_ && pieces_ == other.pieces_;
  }

  std::string str() const;

 private:
  void require_same_ambient(const IntervalUnion& other) const;

  Rational ambient_;
  std::vector<Piece> pieces_;
};

}  // namespace ckpf
