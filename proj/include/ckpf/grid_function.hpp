#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ckpf/interval_union.hpp"

namespace ckpf {

/// Uniform-grid discretization of a function on [0, L): n cells of width
/// L/n, value k attached to the half-open cell [kL/n, (k+1)L/n) and read at
/// the cell midpoint. Norms are midpoint-quadrature norms. Value semantics;
/// const operations are thread-safe.
class GridFunction {
 public:
  GridFunction(Rational ambient, std::size_t cells, double fill = 0.0);

  static GridFunction from_samples(Rational ambient, std::size_t cells,
                                   const std::function<double(double)>& f);
  /// 0/1 indicator of a set, decided by exact rational membership of each
  /// cell midpoint; exact whenever the set's endpoints align with cell
  /// boundaries.
  static GridFunction indicator(const IntervalUnion& set, std::size_t cells);

  /// Seeded pseudo-random function, piecewise constant on aligned blocks of
  /// `block` cells with values uniform in [lo, hi]. Blocks keep the function
  /// resolvable under the expanding compositions of a system whose branch
  /// slopes are at least 1/block, which is what makes the generator-relation
  /// checks exact on affine grid-aligned systems. Deterministic across
  /// platforms.
  static GridFunction random_blocks(Rational ambient, std::size_t cells, std::size_t block,
                                    std::uint64_t seed, double lo = -1.0, double hi = 1.0);

  const Rational& ambient() const { return ambient_; }
  std::size_t cells() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  double cell_width() const { return width_; }
  double midpoint(std::size_t k) const { return (k + 0.5) * width_; }
  Rational midpoint_exact(std::size_t k) const;
  /// Cell index of an exact point in [0, L).
  std::size_t cell_index(const Rational& x) const;

  /// Piecewise-constant lookup; zero outside [0, L).
  double lookup(double x) const;

  double norm_l1() const;
  double norm_l2() const;
  double norm_sup() const;
  double inner(const GridFunction& other) const;

  /// Exact-length integration of the piecewise-constant density over an
  /// interval union: sum of value * |cell n S| with rational cell bounds, so
  /// unaligned set endpoints are handled without quadrature fuzz.
  double integral_over(const IntervalUnion& set) const;
  double integral() const;  // over all of [0, L)

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);
  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;
  GridFunction operator*(double s) const;

  /// Cellwise sqrt; values below -clamp_tol throw, small negatives clamp to 0.
  GridFunction sqrt_cellwise(double clamp_tol = 1e-12) const;
  GridFunction square_cellwise() const;

  double min_value() const;

  /// Mass-preserving coarsening to `coarse_cells` (must divide cells()).
  GridFunction rebin(std::size_t coarse_cells) const;

  /// CSV: header "midpoint,value", one row per cell, ascending midpoints,
  /// decimal notation with round-trip precision.
  void write_csv(std::ostream& os) const;
  static GridFunction read_csv(std::istream& is, const Rational& ambient);

 private:
  void require_compatible(const GridFunction& o) const;

  Rational ambient_;
  double width_;
  std::vector<double> values_;
};

/// Uniform double in [0,1) from a 64-bit generator state, identical on every
/// platform (top 53 bits).
double uniform_unit(std::uint64_t raw);

}  // namespace ckpf
