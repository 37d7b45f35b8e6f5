#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ckpf/interval_union.hpp"
#include "ckpf/rational.hpp"

namespace ckpf {

/// y = slope*x + intercept, slope nonzero.
struct AffineMap {
  Rational slope;
  Rational intercept;
};

/// One monotone side of the parabola y = coeff*(t - vertex)^2, used in the
/// direction that maps a nonnegative interval onto one side of the vertex:
///   forward(x)  = vertex + orientation * sqrt(x / coeff)
///   inverse(y)  = coeff * (y - vertex)^2          (exact on rationals)
/// orientation +1 walks the increasing side (t >= vertex), -1 the
/// decreasing side (t <= vertex).
struct QuadraticSideMap {
  Rational coeff;   // positive
  Rational vertex;
  int orientation;  // +1 or -1
};

/// One analytic, monotone piece of a branch map: a bijection from the source
/// interval onto the target interval with a closed-form inverse and
/// derivative. Orientation-reversing pieces map [a,b) onto (c,d]; target
/// intervals are normalized half-open, which only differs by a null set.
class BranchPiece {
 public:
  BranchPiece(Rational source_lo, Rational source_hi, Rational target_lo, Rational target_hi,
              std::variant<AffineMap, QuadraticSideMap> map);

  const Rational& source_lo() const { return source_lo_; }
  const Rational& source_hi() const { return source_hi_; }
  const Rational& target_lo() const { return target_lo_; }
  const Rational& target_hi() const { return target_hi_; }
  const std::variant<AffineMap, QuadraticSideMap>& map() const { return map_; }

  bool increasing() const;
  bool is_affine() const { return std::holds_alternative<AffineMap>(map_); }

  double forward(double x) const;
  double inverse(double y) const;

  /// Exact forward image of a rational point; available for affine pieces.
  std::optional<Rational> forward_exact(const Rational& x) const;

  /// Exact inverse image of a rational point. Affine pieces invert linearly;
  /// quadratic-side pieces invert through the parabola, which is polynomial,
  /// so this is total.
  Rational inverse_exact(const Rational& y) const;

  /// |d forward / dx| at x; the Radon-Nikodym derivative of the piece.
  double forward_derivative(double x) const;
  /// |d inverse / dy| at y.
  double inverse_derivative(double y) const;

  /// For pieces with constant derivative (affine), |slope| as an exact value.
  std::optional<Rational> constant_forward_derivative() const;

 private:
  void check() const;

  Rational source_lo_, source_hi_;
  Rational target_lo_, target_hi_;
  std::variant<AffineMap, QuadraticSideMap> map_;
};

/// A branch: a monotone-by-pieces bijection from its domain onto its range
/// (both finite unions of intervals), carrying exact piece inverses and
/// derivatives. Piece sources must be pairwise disjoint; whether they tile
/// the declared domain/range is a validation question, reported by
/// BranchingSystem::validate rather than enforced here.
///
/// Truncated constructions may cover only part of the range; the uncovered
/// remainder is exposed as `range_shortfall`, and the derivative of the
/// inverse is extended by zero there.
class BranchMap {
 public:
  BranchMap(std::size_t index, IntervalUnion domain, IntervalUnion range,
            std::vector<BranchPiece> pieces);

  std::size_t index() const { return index_; }
  const IntervalUnion& domain() const { return domain_; }
  const IntervalUnion& range() const { return range_; }
  const std::vector<BranchPiece>& pieces() const { return pieces_; }

  /// Union of piece sources / targets (canonical).
  const IntervalUnion& covered_domain() const { return covered_domain_; }
  const IntervalUnion& covered_range() const { return covered_range_; }
  /// range() minus covered_range(): nonempty only for truncated branches.
  const IntervalUnion& range_shortfall() const { return range_shortfall_; }

  const BranchPiece* piece_for_source(const Rational& x) const;
  const BranchPiece* piece_for_target(const Rational& y) const;
  const BranchPiece* piece_for_source(double x) const;
  const BranchPiece* piece_for_target(double y) const;

  /// Forward evaluation at x in the domain; throws OutOfDomainError outside.
  double forward(double x) const;
  /// Derivative |f'| at x, extended by zero outside the covered domain.
  double forward_derivative_or_zero(double x) const;
  /// Derivative |(f^-1)'| at y, extended by zero outside covered targets.
  double inverse_derivative_or_zero(double y) const;

 private:
  std::size_t index_;
  IntervalUnion domain_, range_;
  std::vector<BranchPiece> pieces_;  // sorted by source_lo
  IntervalUnion covered_domain_, covered_range_, range_shortfall_;
};

struct OutOfDomainError : std::domain_error {
  OutOfDomainError(std::size_t branch, double x)
      : std::domain_error("point " + std::to_string(x) + " outside the domain of branch " +
                          std::to_string(branch)),
        branch_index(branch), point(x) {}
  std::size_t branch_index;
  double point;
};

}  // namespace ckpf
