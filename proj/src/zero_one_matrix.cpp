#include "ckpf/zero_one_matrix.hpp"

#include <algorithm>

namespace ckpf {

ZeroOneMatrix ZeroOneMatrix::full_ones(std::size_t n_max) {
  return ZeroOneMatrix(Kind::FullOnes, n_max);
}

ZeroOneMatrix ZeroOneMatrix::explicit_block(std::vector<std::vector<int>> rows, std::size_t n_max) {
  ZeroOneMatrix m(Kind::ExplicitBlock, n_max);
  for (const auto& r : rows)
    for (int e : r)
      if (e != 0 && e != 1) throw std::invalid_argument("ZeroOneMatrix: entries must be 0 or 1");
  m.rows_ = std::move(rows);
  m.check_no_zero_rows();
  return m;
}

ZeroOneMatrix ZeroOneMatrix::row_supports(std::map<std::size_t, std::vector<std::size_t>> supports,
                                          std::size_t n_max) {
  ZeroOneMatrix m(Kind::RowSupports, n_max);
  for (auto& [i, s] : supports) {
    if (i == 0) throw std::invalid_argument("ZeroOneMatrix: row indices are 1-based");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.front() == 0)
      throw std::invalid_argument("ZeroOneMatrix: column indices are 1-based");
  }
  m.supports_ = std::move(supports);
  m.check_no_zero_rows();
  return m;
}

ZeroOneMatrix ZeroOneMatrix::staircase(std::size_t n_max) {
  return ZeroOneMatrix(Kind::Staircase, n_max);
}

void ZeroOneMatrix::check_no_zero_rows() const {
  for (std::size_t i = 1; i <= n_max_; ++i) {
    auto s = row_support(i);
    if (s.has_value() && s->empty()) throw ZeroRowError(i);
  }
}

int ZeroOneMatrix::entry(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0) throw std::invalid_argument("ZeroOneMatrix: indices are 1-based");
  switch (kind_) {
    case Kind::FullOnes:
      return 1;
    case Kind::ExplicitBlock:
      if (i > rows_.size()) return 0;
      if (j > rows_[i - 1].size()) return 0;
      return rows_[i - 1][j - 1];
    case Kind::RowSupports: {
      auto it = supports_.find(i);
      if (it == supports_.end()) return 0;
      return std::binary_search(it->second.begin(), it->second.end(), j) ? 1 : 0;
    }
    case Kind::Staircase:
      return j <= (i + 1) / 2 ? 1 : 0;
  }
  return 0;
}

std::optional<std::vector<std::size_t>> ZeroOneMatrix::row_support(std::size_t i) const {
  if (i == 0) throw std::invalid_argument("ZeroOneMatrix: indices are 1-based");
  switch (kind_) {
    case Kind::FullOnes:
      return std::nullopt;
    case Kind::ExplicitBlock: {
      std::vector<std::size_t> s;
      if (i <= rows_.size())
        for (std::size_t j = 0; j < rows_[i - 1].size(); ++j)
          if (rows_[i - 1][j] == 1) s.push_back(j + 1);
      return s;
    }
    case Kind::RowSupports: {
      auto it = supports_.find(i);
      if (it == supports_.end()) return std::vector<std::size_t>{};
      return it->second;
    }
    case Kind::Staircase: {
      std::vector<std::size_t> s((i + 1) / 2);
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = j + 1;
      return s;
    }
  }
  return std::nullopt;
}

int ZeroOneMatrix::column_matches(const std::vector<std::size_t>& rows_one,
                                  const std::vector<std::size_t>& rows_zero,
                                  std::size_t j) const {
  for (std::size_t u : rows_one)
    if (entry(u, j) == 0) return 0;
  for (std::size_t v : rows_zero)
    if (entry(v, j) == 1) return 0;
  return 1;
}

std::optional<std::vector<std::size_t>> ZeroOneMatrix::matching_columns(
    const std::vector<std::size_t>& rows_one, const std::vector<std::size_t>& rows_zero) const {
  // A finite U-row support bounds the candidate columns.
  for (std::size_t u : rows_one) {
    auto s = row_support(u);
    if (!s.has_value()) continue;
    std::vector<std::size_t> out;
    for (std::size_t j : *s)
      if (column_matches(rows_one, rows_zero, j)) out.push_back(j);
    return out;
  }
  // No finite row in U. FullOnes still permits exact reasoning: any V-row
  // kills every column, and otherwise every column matches.
  if (kind_ == Kind::FullOnes) {
    if (!rows_zero.empty()) return std::vector<std::size_t>{};
    return std::nullopt;  // all of N matches
  }
  // Remaining cases have U empty (all finite-kind rows were handled above),
  // so the match set is co-finite or worse; report not provably finite.
  return std::nullopt;
}

std::string ZeroOneMatrix::describe() const {
  switch (kind_) {
    case Kind::FullOnes:
      return "full-ones(n_max=" + std::to_string(n_max_) + ")";
    case Kind::ExplicitBlock:
      return "explicit-block(" + std::to_string(rows_.size()) + " rows, n_max=" +
             std::to_string(n_max_) + ")";
    case Kind::RowSupports:
      return "row-supports(" + std::to_string(supports_.size()) + " rows, n_max=" +
             std::to_string(n_max_) + ")";
    case Kind::Staircase:
      return "staircase(n_max=" + std::to_string(n_max_) + ")";
  }
  return "?";
}

}  // namespace ckpf
