#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckpf/branching_system.hpp"
#include "ckpf/grid_function.hpp"

namespace ckpf {

/// Per-(system, grid) tables for the generator operators on grid functions:
///   (S_i phi)(x)  = chi_{R_i}(x) * sqrt(phi_inv_i(x)) * phi(F(x))
///   (S_i* psi)(x) = chi_{D_i}(x) * sqrt(phi_i(x))     * psi(f_i(x))
/// with the derivative factors extended by zero off the piece covers. Cell
/// memberships and affine/polynomial images of cell midpoints are resolved
/// in exact rational arithmetic once, here, so repeated applications are
/// plain table walks. Immutable after construction.
class OperatorTable {
 public:
  OperatorTable(const BranchingSystem& sys, std::size_t cells);

  const BranchingSystem& system() const { return *sys_; }
  std::size_t cells() const { return cells_; }
  GridFunction zeros() const { return GridFunction(sys_->ambient(), cells_); }

  GridFunction apply_generator(std::size_t i, const GridFunction& phi) const;
  GridFunction apply_generator_adjoint(std::size_t i, const GridFunction& psi) const;

  /// chi_{D_i} / chi_{R_i} as grid functions (midpoint membership).
  const GridFunction& domain_indicator(std::size_t i) const;
  const GridFunction& range_indicator(std::size_t i) const;

  /// Squared adjoint weight = forward derivative at the cell midpoint,
  /// needed by the expanded transfer-operator form.
  double forward_derivative_at(std::size_t i, std::size_t cell) const;
  /// Target cell of f_i at the midpoint of `cell`, or npos outside D_i.
  std::size_t branch_image_cell(std::size_t i, std::size_t cell) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct BranchTable {
    // indexed by output cell; weight 0 encodes "outside"
    std::vector<double> gen_weight;      // sqrt of inverse derivative on targets
    std::vector<std::size_t> gen_src;    // cell of F(midpoint)
    std::vector<double> adj_weight;      // sqrt of forward derivative on sources
    std::vector<std::size_t> adj_dst;    // cell of f_i(midpoint)
    GridFunction chi_domain, chi_range;
  };

  const BranchingSystem* sys_;
  std::size_t cells_;
  std::vector<BranchTable> tables_;
};

/// Recommended grid for a system: the smallest cell count >= min_cells of
/// the form (integer ambient length) * 2^k on which every piece and set
/// breakpoint of the system falls exactly on a cell boundary. `aligned` is
/// false when no such count exists below the search cap, in which case the
/// smallest admissible fallback is returned and callers should warn.
struct GridChoice {
  std::size_t cells = 0;
  bool aligned = false;
};
GridChoice aligned_cells(const BranchingSystem& sys, std::size_t min_cells = 4096);

/// Whether every breakpoint of the system lies on a boundary of an n-cell grid.
bool grid_is_aligned(const BranchingSystem& sys, std::size_t cells);

/// Block size (power of two, in cells) at which random test functions must
/// be piecewise constant for the expanding compositions of this system to be
/// grid-exact: at least the reciprocal of the smallest affine piece slope.
/// On any finite grid, S_i*S_i has rank at most #cells(R_i), so no
/// discretization reproduces chi_{D_i}-multiplication on functions with
/// unresolvable fine structure; block-constant inputs are the exactness
/// domain, not a shortcut.
std::size_t resolvable_block(const BranchingSystem& sys, std::size_t cells);

/// Residual report for the four generator relations:
///  1. S_i S_i* S_j S_j* = 0 for i != j
///  2. S_i*S_i and S_j*S_j commute
///  3. S_i*S_i S_j S_j* = A(i,j) S_j S_j*
///  4. prod_U S_u*S_u prod_V (1 - S_v*S_v) = sum_{matching j} S_j S_j*
/// Relation 4 applies only to (U,V) whose matching-column set is provably
/// finite; other pairs are reported vacuous and skipped.
struct RelationReport {
  struct Entry {
    int relation = 0;
    std::string subject;
    double residual = 0.0;  // max over test functions
    bool pass = false;
    bool skipped = false;
    std::string note;
  };
  std::vector<Entry> entries;
  double max_residual[5] = {0, 0, 0, 0, 0};  // index by relation, [0] unused
  double tolerance = 0.0;
  bool pass = true;

  const Entry* worst_failure() const;
};

RelationReport verify_ck_relations(const OperatorTable& table,
                                   const std::vector<GridFunction>& test_fns,
                                   const std::vector<UVPair>& uv_pairs, double tol);

}  // namespace ckpf
