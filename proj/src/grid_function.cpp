#include "ckpf/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace ckpf {

double uniform_unit(std::uint64_t raw) { return static_cast<double>(raw >> 11) * 0x1.0p-53; }

GridFunction::GridFunction(Rational ambient, std::size_t cells, double fill)
    : ambient_(std::move(ambient)), width_(0.0), values_(cells, fill) {
  if (cells < 1) throw std::invalid_argument("GridFunction: need at least one cell");
  if (!(ambient_ > Rational(0))) throw std::invalid_argument("GridFunction: ambient must be positive");
  width_ = ambient_.to_double() / static_cast<double>(cells);
}

GridFunction GridFunction::from_samples(Rational ambient, std::size_t cells,
                                        const std::function<double(double)>& f) {
  GridFunction g(std::move(ambient), cells);
  for (std::size_t k = 0; k < cells; ++k) g.values_[k] = f(g.midpoint(k));
  return g;
}

GridFunction GridFunction::indicator(const IntervalUnion& set, std::size_t cells) {
  GridFunction g(set.ambient(), cells);
  for (std::size_t k = 0; k < cells; ++k)
    g.values_[k] = set.contains(g.midpoint_exact(k)) ? 1.0 : 0.0;
  return g;
}

GridFunction GridFunction::random_blocks(Rational ambient, std::size_t cells, std::size_t block,
                                         std::uint64_t seed, double lo, double hi) {
  if (block == 0 || cells % block != 0)
    throw std::invalid_argument("GridFunction: block size must divide the cell count");
  GridFunction g(std::move(ambient), cells);
  std::mt19937_64 rng(seed);
  for (std::size_t b = 0; b < cells / block; ++b) {
    double v = lo + (hi - lo) * uniform_unit(rng());
    for (std::size_t k = 0; k < block; ++k) g.values_[b * block + k] = v;
  }
  return g;
}

Rational GridFunction::midpoint_exact(std::size_t k) const {
  return ambient_ * Rational(2 * static_cast<long>(k) + 1, 2 * static_cast<long>(cells()));
}

std::size_t GridFunction::cell_index(const Rational& x) const {
  if (x.is_negative() || x >= ambient_)
    throw std::invalid_argument("GridFunction: point outside the ambient interval");
  Rational scaled = x * Rational(static_cast<long>(cells())) / ambient_;
  return static_cast<std::size_t>(scaled.floor_i64());
}

double GridFunction::lookup(double x) const {
  if (x < 0.0) return 0.0;
  auto idx = static_cast<long>(std::floor(x / width_));
  if (idx < 0 || idx >= static_cast<long>(cells())) return 0.0;
  return values_[static_cast<std::size_t>(idx)];
}

double GridFunction::norm_l1() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s * width_;
}

double GridFunction::norm_l2() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * width_);
}

double GridFunction::norm_sup() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double GridFunction::inner(const GridFunction& o) const {
  require_compatible(o);
  double s = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) s += values_[k] * o.values_[k];
  return s * width_;
}

double GridFunction::integral_over(const IntervalUnion& set) const {
  if (set.ambient() != ambient_) throw std::invalid_argument("GridFunction: ambient mismatch");
  const long n = static_cast<long>(cells());
  double total = 0.0;
  for (const auto& p : set.pieces()) {
    // cells touched: [floor(lo*n/L), ceil(hi*n/L))
    long first = (p.lo * Rational(n) / ambient_).floor_i64();
    Rational hi_scaled = p.hi * Rational(n) / ambient_;
    long last = hi_scaled.floor_i64();
    if (Rational(last) == hi_scaled) last -= 1;  // hi on a boundary
    for (long k = first; k <= last && k < n; ++k) {
      Rational cell_lo = ambient_ * Rational(k, n);
      Rational cell_hi = ambient_ * Rational(k + 1, n);
      Rational lo = std::max(cell_lo, p.lo, [](const Rational& a, const Rational& b) { return a < b; });
      Rational hi = std::min(cell_hi, p.hi, [](const Rational& a, const Rational& b) { return a < b; });
      if (hi > lo) total += values_[static_cast<std::size_t>(k)] * (hi - lo).to_double();
    }
  }
  return total;
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * width_;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
  GridFunction g = *this;
  g += o;
  return g;
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
  GridFunction g = *this;
  g -= o;
  return g;
}

GridFunction GridFunction::operator*(double s) const {
  GridFunction g = *this;
  g *= s;
  return g;
}

GridFunction GridFunction::sqrt_cellwise(double clamp_tol) const {
  GridFunction g = *this;
  for (double& v : g.values_) {
    if (v < -clamp_tol)
      throw std::invalid_argument("GridFunction: sqrt of a negative cell value " + std::to_string(v));
    v = v <= 0.0 ? 0.0 : std::sqrt(v);
  }
  return g;
}

GridFunction GridFunction::square_cellwise() const {
  GridFunction g = *this;
  for (double& v : g.values_) v *= v;
  return g;
}

double GridFunction::min_value() const {
  double m = values_.empty() ? 0.0 : values_[0];
  for (double v : values_) m = std::min(m, v);
  return m;
}

GridFunction GridFunction::rebin(std::size_t coarse_cells) const {
  if (coarse_cells == 0 || cells() % coarse_cells != 0)
    throw std::invalid_argument("GridFunction: rebin target must divide the cell count");
  std::size_t factor = cells() / coarse_cells;
  GridFunction g(ambient_, coarse_cells);
  for (std::size_t b = 0; b < coarse_cells; ++b) {
    double s = 0.0;
    for (std::size_t k = 0; k < factor; ++k) s += values_[b * factor + k];
    g.values_[b] = s / static_cast<double>(factor);
  }
  return g;
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "midpoint,value\n";
  char buf[64];
  for (std::size_t k = 0; k < values_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", midpoint(k));
    os << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", values_[k]);
    os << buf << "\n";
  }
}

GridFunction GridFunction::read_csv(std::istream& is, const Rational& ambient) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("midpoint,value", 0) != 0)
    throw std::invalid_argument("GridFunction: CSV must start with a 'midpoint,value' header");
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("GridFunction: malformed CSV row '" + line + "'");
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  if (vals.empty()) throw std::invalid_argument("GridFunction: CSV has no data rows");
  GridFunction g(ambient, vals.size());
  g.values_ = std::move(vals);
  return g;
}

void GridFunction::require_compatible(const GridFunction& o) const {
  if (ambient_ != o.ambient_ || cells() != o.cells())
    throw std::invalid_argument("GridFunction: grid mismatch (ambient or cell count)");
}

}  // namespace ckpf
