#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckpf {

/// Raised when an instantiated row has no ones: such a row cannot carry a
/// branch (its domain would be empty).
struct ZeroRowError : std::invalid_argument {
  explicit ZeroRowError(std::size_t row_index)
      : std::invalid_argument("matrix row " + std::to_string(row_index) +
                              " has no ones among the instantiated columns"),
        row(row_index) {}
  std::size_t row;
};

/// A possibly infinite 0-1 matrix given by an entry rule. The matrix itself
/// is never materialized; `ambient_row_count` only caps which rows the rest
/// of the library will instantiate branches for. Indices are 1-based.
///
/// Kinds:
///  - FullOnes:     every entry is 1 (rows are genuinely infinite).
///  - ExplicitBlock: finite block of explicit rows; entries beyond a row's
///                   stored columns, and all rows beyond the block, are 0.
///  - RowSupports:  per-row finite column supports; unlisted rows are 0.
///  - Staircase:    row i has support {1, ..., ceil(i/2)} for every i.
class ZeroOneMatrix {
 public:
  enum class Kind { FullOnes, ExplicitBlock, RowSupports, Staircase };

  static ZeroOneMatrix full_ones(std::size_t ambient_row_count);
  static ZeroOneMatrix explicit_block(std::vector<std::vector<int>> rows,
                                      std::size_t ambient_row_count);
  static ZeroOneMatrix row_supports(std::map<std::size_t, std::vector<std::size_t>> supports,
                                    std::size_t ambient_row_count);
  static ZeroOneMatrix staircase(std::size_t ambient_row_count);

  Kind kind() const { return kind_; }
  std::size_t ambient_row_count() const { return n_max_; }

  /// Entry A(i,j) for i,j >= 1.
  int entry(std::size_t i, std::size_t j) const;

  /// The finite set {j : entry(i,j) = 1}, or nullopt when row i is infinite
  /// (FullOnes). Returned sorted ascending.
  std::optional<std::vector<std::size_t>> row_support(std::size_t i) const;

  bool row_finite(std::size_t /*i*/) const { return kind_ != Kind::FullOnes; }

  /// The product prod_{u in U} A(u,j) * prod_{v in V} (1 - A(v,j)).
  /// Empty products are 1; the result is 1 exactly when column j has ones at
  /// every U-row and zeros at every V-row.
  int column_matches(const std::vector<std::size_t>& rows_one,
                     const std::vector<std::size_t>& rows_zero, std::size_t j) const;

  /// The set {j : column_matches(U,V,j) = 1} when it is provably finite,
  /// nullopt otherwise. Conservative: a nullopt answer means "not shown
  /// finite", never an incorrect finite set. Finiteness is established when
  /// some U-row has a finite support (then the set is a subset of it), or
  /// when the kind allows exact reasoning (FullOnes with nonempty V gives
  /// the empty set).
  std::optional<std::vector<std::size_t>> matching_columns(
      const std::vector<std::size_t>& rows_one,
      const std::vector<std::size_t>& rows_zero) const;

  std::string describe() const;

 private:
  ZeroOneMatrix(Kind kind, std::size_t n_max) : kind_(kind), n_max_(n_max) {
    if (n_max_ == 0) throw std::invalid_argument("ZeroOneMatrix: ambient_row_count must be >= 1");
  }
  void check_no_zero_rows() const;

  Kind kind_;
  std::size_t n_max_;
  std::vector<std::vector<int>> rows_;                         // ExplicitBlock
  std::map<std::size_t, std::vector<std::size_t>> supports_;  // RowSupports
};

}  // namespace ckpf
