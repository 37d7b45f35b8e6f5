#pragma once

#include "ckpf/branching_system.hpp"

namespace ckpf::testing {

/// Identity family on [0,2) declared compatible with [[1,1],[1,0]]: the
/// matrix promises R_2 inside D_1, the sets refuse. Rejected by condition 4
/// and by generator relation 3; everything else about it is well formed.
inline BranchingSystem identity_mismatch_system() {
  Rational L(2);
  IntervalUnion left(L, {{Rational(0), Rational(1)}});
  IntervalUnion right(L, {{Rational(1), Rational(2)}});
  std::vector<BranchMap> branches;
  branches.emplace_back(1, left, left,
                        std::vector<BranchPiece>{BranchPiece(
                            Rational(0), Rational(1), Rational(0), Rational(1),
                            AffineMap{Rational(1), Rational(0)})});
  branches.emplace_back(2, right, right,
                        std::vector<BranchPiece>{BranchPiece(
                            Rational(1), Rational(2), Rational(1), Rational(2),
                            AffineMap{Rational(1), Rational(0)})});
  return BranchingSystem(L, std::move(branches),
                         ZeroOneMatrix::explicit_block({{1, 1}, {1, 0}}, 2), "counterexample");
}

}  // namespace ckpf::testing
