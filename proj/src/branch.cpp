#include "ckpf/branch.hpp"

#include <algorithm>
#include <cmath>

namespace ckpf {

BranchPiece::BranchPiece(Rational source_lo, Rational source_hi, Rational target_lo,
                         Rational target_hi, std::variant<AffineMap, QuadraticSideMap> map)
    : source_lo_(std::move(source_lo)),
      source_hi_(std::move(source_hi)),
      target_lo_(std::move(target_lo)),
      target_hi_(std::move(target_hi)),
      map_(std::move(map)) {
  check();
}

bool BranchPiece::increasing() const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return !a->slope.is_negative();
  return std::get<QuadraticSideMap>(map_).orientation > 0;
}

double BranchPiece::forward(double x) const {
  if (const auto* a = std::get_if<AffineMap>(&map_))
    return a->slope.to_double() * x + a->intercept.to_double();
  const auto& q = std::get<QuadraticSideMap>(map_);
  return q.vertex.to_double() + q.orientation * std::sqrt(x / q.coeff.to_double());
}

double BranchPiece::inverse(double y) const {
  if (const auto* a = std::get_if<AffineMap>(&map_))
    return (y - a->intercept.to_double()) / a->slope.to_double();
  const auto& q = std::get<QuadraticSideMap>(map_);
  double d = y - q.vertex.to_double();
  return q.coeff.to_double() * d * d;
}

std::optional<Rational> BranchPiece::forward_exact(const Rational& x) const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return a->slope * x + a->intercept;
  return std::nullopt;
}

Rational BranchPiece::inverse_exact(const Rational& y) const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return (y - a->intercept) / a->slope;
  const auto& q = std::get<QuadraticSideMap>(map_);
  Rational d = y - q.vertex;
  return q.coeff * d * d;
}

double BranchPiece::forward_derivative(double x) const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return std::abs(a->slope.to_double());
  const auto& q = std::get<QuadraticSideMap>(map_);
  // d/dx [vertex +- sqrt(x/c)] = +-1 / (2 sqrt(c x))
  return 1.0 / (2.0 * std::sqrt(q.coeff.to_double() * x));
}

double BranchPiece::inverse_derivative(double y) const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return 1.0 / std::abs(a->slope.to_double());
  const auto& q = std::get<QuadraticSideMap>(map_);
  return 2.0 * q.coeff.to_double() * std::abs(y - q.vertex.to_double());
}

std::optional<Rational> BranchPiece::constant_forward_derivative() const {
  if (const auto* a = std::get_if<AffineMap>(&map_)) return a->slope.abs();
  return std::nullopt;
}

void BranchPiece::check() const {
  if (!(source_lo_ < source_hi_) || !(target_lo_ < target_hi_))
    throw std::invalid_argument("BranchPiece: degenerate source or target interval");
  if (const auto* a = std::get_if<AffineMap>(&map_)) {
    if (a->slope.is_zero()) throw std::invalid_argument("BranchPiece: affine slope is zero");
    // endpoint images must match the target exactly, up to orientation
    Rational lo_img = a->slope * source_lo_ + a->intercept;
    Rational hi_img = a->slope * source_hi_ + a->intercept;
    if (a->slope.is_negative()) std::swap(lo_img, hi_img);
    if (lo_img != target_lo_ || hi_img != target_hi_)
      throw std::invalid_argument("BranchPiece: affine endpoint images do not match the target");
    return;
  }
  const auto& q = std::get<QuadraticSideMap>(map_);
  if (!(q.coeff > Rational(0)))
    throw std::invalid_argument("BranchPiece: quadratic coefficient must be positive");
  if (q.orientation != 1 && q.orientation != -1)
    throw std::invalid_argument("BranchPiece: orientation must be +1 or -1");
  if (source_lo_.is_negative())
    throw std::invalid_argument("BranchPiece: quadratic-side source must lie in [0,inf)");
  // the vertex is where the inverse derivative vanishes; keep it off the
  // open target interval
  if (q.vertex > target_lo_ && q.vertex < target_hi_)
    throw std::invalid_argument("BranchPiece: vertex inside the open target interval");
  auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(v)); };
  double lo_img = forward(source_lo_.to_double());
  double hi_img = forward(source_hi_.to_double());
  if (q.orientation < 0) std::swap(lo_img, hi_img);
  if (!close(lo_img, target_lo_.to_double()) || !close(hi_img, target_hi_.to_double()))
    throw std::invalid_argument("BranchPiece: quadratic endpoint images do not match the target");
}

BranchMap::BranchMap(std::size_t index, IntervalUnion domain, IntervalUnion range,
                     std::vector<BranchPiece> pieces)
    : index_(index),
      domain_(std::move(domain)),
      range_(std::move(range)),
      pieces_(std::move(pieces)),
      covered_domain_(domain_.ambient()),
      covered_range_(domain_.ambient()),
      range_shortfall_(domain_.ambient()) {
  if (domain_.ambient() != range_.ambient())
    throw std::invalid_argument("BranchMap: domain and range ambient mismatch");
  if (index_ == 0) throw std::invalid_argument("BranchMap: indices are 1-based");
  std::sort(pieces_.begin(), pieces_.end(), [](const BranchPiece& a, const BranchPiece& b) {
    return a.source_lo() < b.source_lo();
  });
  std::vector<std::pair<Rational, Rational>> src, tgt;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (k > 0 && pieces_[k].source_lo() < pieces_[k - 1].source_hi())
      throw std::invalid_argument("BranchMap: overlapping piece sources");
    src.emplace_back(pieces_[k].source_lo(), pieces_[k].source_hi());
    tgt.emplace_back(pieces_[k].target_lo(), pieces_[k].target_hi());
  }
  covered_domain_ = IntervalUnion(domain_.ambient(), std::move(src));
  covered_range_ = IntervalUnion(domain_.ambient(), std::move(tgt));
  // overlapping targets collapse under canonicalization; detect by measure
  Rational tgt_meas(0);
  for (const auto& p : pieces_) tgt_meas = tgt_meas + (p.target_hi() - p.target_lo());
  if (tgt_meas != covered_range_.measure())
    throw std::invalid_argument("BranchMap: overlapping piece targets");
  range_shortfall_ = range_.difference(covered_range_);
}

const BranchPiece* BranchMap::piece_for_source(const Rational& x) const {
  for (const auto& p : pieces_)
    if (x >= p.source_lo() && x < p.source_hi()) return &p;
  return nullptr;
}

const BranchPiece* BranchMap::piece_for_target(const Rational& y) const {
  for (const auto& p : pieces_)
    if (y >= p.target_lo() && y < p.target_hi()) return &p;
  return nullptr;
}

const BranchPiece* BranchMap::piece_for_source(double x) const {
  for (const auto& p : pieces_)
    if (x >= p.source_lo().to_double() && x < p.source_hi().to_double()) return &p;
  return nullptr;
}

const BranchPiece* BranchMap::piece_for_target(double y) const {
  for (const auto& p : pieces_)
    if (y >= p.target_lo().to_double() && y < p.target_hi().to_double()) return &p;
  return nullptr;
}

double BranchMap::forward(double x) const {
  const BranchPiece* p = piece_for_source(x);
  if (!p) throw OutOfDomainError(index_, x);
  return p->forward(x);
}

double BranchMap::forward_derivative_or_zero(double x) const {
  const BranchPiece* p = piece_for_source(x);
  return p ? p->forward_derivative(x) : 0.0;
}

double BranchMap::inverse_derivative_or_zero(double y) const {
  const BranchPiece* p = piece_for_target(y);
  return p ? p->inverse_derivative(y) : 0.0;
}

}  // namespace ckpf
