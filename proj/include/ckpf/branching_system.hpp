#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ckpf/branch.hpp"
#include "ckpf/zero_one_matrix.hpp"

namespace ckpf {

/// A pair (U, V) of finite row-index sets used by the compatibility
/// condition 5 and by the fourth generator relation.
struct UVPair {
  std::vector<std::size_t> rows_one;   // U
  std::vector<std::size_t> rows_zero;  // V
  std::string str() const;
};

/// Report produced by BranchingSystem::validate. One entry per elementary
/// check; failures are entries, not exceptions.
struct ValidationReport {
  struct Entry {
    int condition = 0;        // 1..6
    std::string subject;      // branch / pair / (U,V) being checked
    bool pass = false;
    bool skipped = false;     // vacuous or not decidable at this truncation
    double metric = 0.0;      // residual or measure, when meaningful
    std::string note;
  };
  std::vector<Entry> entries;
  bool overall_pass = true;

  void add(Entry e);
  /// Entries for one condition.
  std::vector<const Entry*> condition(int c) const;
  const Entry* first_failure() const;
};

/// Report produced by BranchingSystem::lemma_check: the sufficient criterion
/// (pairwise disjoint ranges + full cover + row-wise domain decomposition)
/// that implies compatibility conditions 4 and 5 at once.
struct LemmaReport {
  bool ranges_pairwise_disjoint = false;
  bool cover_checked = false;  // the full-cover hypothesis is optional
  bool covers_ambient = false;
  struct RowEntry {
    std::size_t row = 0;
    bool pass = false;
    bool skipped = false;  // infinite row or support beyond the truncation
    std::string note;
  };
  std::vector<RowEntry> rows;
  bool domain_decomposition_pass = true;  // over non-skipped rows
  /// True when every hypothesis was checked and held, so conditions 4 and 5
  /// are implied without direct verification. When the cover hypothesis was
  /// not checked (or failed), nothing is implied and the direct validator
  /// remains authoritative.
  bool implies_conditions_4_and_5 = false;
};

/// A family of branches f_i : D_i -> R_i on the ambient interval [0, L)
/// together with the coarse map F that inverts every branch on its range,
/// and the 0-1 matrix the family is compatible with. Immutable after
/// construction; all evaluation is const and safe to share across threads.
class BranchingSystem {
 public:
  BranchingSystem(Rational ambient, std::vector<BranchMap> branches, ZeroOneMatrix matrix,
                  std::string name = "custom");

  const Rational& ambient() const { return ambient_; }
  const std::vector<BranchMap>& branches() const { return branches_; }
  const BranchMap& branch(std::size_t i) const;  // 1-based
  std::size_t branch_count() const { return branches_.size(); }
  const ZeroOneMatrix& matrix() const { return matrix_; }
  const std::string& name() const { return name_; }

  /// Union of the instantiated ranges.
  const IntervalUnion& instantiated_range_union() const { return instantiated_ranges_; }

  /// The a.e. union of ALL ranges of the ideal (untruncated) family, as
  /// declared by the constructor; defaults to the instantiated union. Used
  /// to decide whether a density is supported where the truncated sums can
  /// eventually capture it.
  const IntervalUnion& declared_range_support() const { return declared_range_support_; }
  void declare_range_support(IntervalUnion s);

  /// The coarse map F: applies the inverse of the branch piece whose target
  /// contains x, and the identity off every piece target. Total on the
  /// ambient interval.
  double coarse_map(double x) const;

  /// Exact coarse map on rational points. Piece inverses are affine or
  /// polynomial, so this is total and exact.
  Rational coarse_map_exact(const Rational& x) const;

  /// Branch evaluation helpers (1-based index). Throw OutOfDomainError when
  /// x is outside the relevant set.
  double eval_branch(std::size_t i, double x) const;
  double eval_branch_derivative(std::size_t i, double x) const;
  double eval_inverse_derivative(std::size_t i, double y) const;

  /// Checks the six branching-system conditions:
  ///  1. piece sources tile D_i and piece targets tile R_i (minus any
  ///     declared truncation shortfall), exactly;
  ///  2. F(f_i(x)) = x on sampled interior points of every piece;
  ///  3. ranges pairwise a.e.-disjoint, exactly;
  ///  4. for instantiated (i,j): R_j and D_i are a.e.-disjoint when
  ///     A(i,j) = 0 and R_j is a.e.-contained in D_i when A(i,j) = 1;
  ///  5. for each supplied (U,V) with provably finite matching-column set:
  ///     the D-intersection equals the matching R-union a.e.;
  ///  6. piece derivatives positive on open piece interiors.
  ValidationReport validate(std::size_t grid_points_per_branch,
                            const std::vector<UVPair>& uv_pairs) const;

  /// The sufficient criterion for conditions 4 and 5. The full-cover
  /// hypothesis (ambient = union of ranges a.e.) is checked only when
  /// `cover_required`; truncated families and families filling a proper
  /// subinterval fail it without being wrong.
  LemmaReport lemma_check(bool cover_required) const;

 private:
  Rational ambient_;
  std::vector<BranchMap> branches_;
  ZeroOneMatrix matrix_;
  std::string name_;
  IntervalUnion instantiated_ranges_;
  IntervalUnion declared_range_support_;

  struct TargetSlot {
    double lo, hi;
    Rational lo_r, hi_r;
    std::size_t branch;  // 0-based
    const BranchPiece* piece;
  };
  std::vector<TargetSlot> target_index_;  // sorted by lo
};

/// The canonical constant-derivative two-branch system on [0,1):
/// halves as branches, doubling as the coarse map, all-ones 2x2 matrix.
BranchingSystem doubling_system();

/// Standard constructive family for an arbitrary matrix without zero rows:
/// R_i = [i, i+1) for i = 1..n_max on the ambient [0, n_max+1), domain
/// D_i = union of R_j over the instantiated ones of row i, each branch
/// affine piecewise onto a subdivision of R_i. Finite rows split the range
/// into equal parts; rows declared infinite use geometric lengths 2^-k and
/// leave the tail of the range uncovered (reported as shortfall).
BranchingSystem standard_system(const ZeroOneMatrix& matrix, std::size_t n_max);

/// Infinite-ranges example on [0,1): ranges accumulate toward 1/2 with
/// dyadic endpoints, every domain is all of [0,1), matrix full-ones.
/// Instantiates branches 1..n_max; the declared range support is [0, 1/2).
BranchingSystem o_infinity_system(std::size_t n_max);

/// Parabolic example: R_i = [i-1, i), D_i = [0, ceil(i/2)), branch i the
/// monotone side of a parabola with coefficient ceil(i/2) (decreasing side
/// for odd i with vertex at i, increasing side for even i with vertex at
/// i-1), staircase matrix. Branch i is instantiated only when its range
/// fits inside the ambient [0, ambient_l); n_max still bounds the matrix
/// truncation. Requires ambient_l >= ceil(n_max/2) so every domain fits.
BranchingSystem quadratic_system(std::size_t n_max, const Rational& ambient_l);

/// Default (U,V) battery: singletons {i} with provably finite match sets,
/// plus all pairs U={i}, V={j} with i,j <= min(branch_count, cap).
std::vector<UVPair> default_uv_pairs(const BranchingSystem& sys, std::size_t cap = 6);

}  // namespace ckpf
