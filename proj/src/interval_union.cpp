#include "ckpf/interval_union.hpp"

#include <algorithm>

namespace ckpf {

IntervalUnion::IntervalUnion(Rational ambient) : ambient_(std::move(ambient)) {
  if (!(ambient_ > Rational(0)))
    throw std::invalid_argument("IntervalUnion: ambient length must be positive");
}

IntervalUnion::IntervalUnion(Rational ambient, std::vector<std::pair<Rational, Rational>> raw)
    : IntervalUnion(std::move(ambient)) {
  std::vector<Piece> ps;
  ps.reserve(raw.size());
  for (auto& [lo, hi] : raw) {
    if (lo > hi) throw std::invalid_argument("IntervalUnion: piece with lo > hi");
    if (lo == hi) continue;  // empty piece, dropped
    if (lo < Rational(0) || hi > ambient_)
      throw std::invalid_argument("IntervalUnion: piece outside ambient [0," + ambient_.str() + ")");
    ps.push_back({std::move(lo), std::move(hi)});
  }
  std::sort(ps.begin(), ps.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (auto& p : ps) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      if (p.hi > pieces_.back().hi) pieces_.back().hi = p.hi;
    } else {
      pieces_.push_back(p);
    }
  }
}

Rational IntervalUnion::measure() const {
  Rational m(0);
  for (const auto& p : pieces_) m = m + (p.hi - p.lo);
  return m;
}

bool IntervalUnion::contains(const Rational& x) const {
  for (const auto& p : pieces_) {
    if (x < p.lo) return false;
    if (x < p.hi) return true;
  }
  return false;
}

namespace {

// Generic boolean combine over the merged endpoint sweep.
IntervalUnion combine(const IntervalUnion& a, const IntervalUnion& b, bool (*keep)(bool, bool)) {
  std::vector<Rational> cuts;
  cuts.push_back(Rational(0));
  for (const auto& p : a.pieces()) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
  for (const auto& p : b.pieces()) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
  cuts.push_back(a.ambient());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // membership is constant on (cuts[i], cuts[i+1]); probe with the left
    // endpoint, which half-open pieces classify identically
    bool in_a = a.contains(cuts[i]);
    bool in_b = b.contains(cuts[i]);
    if (keep(in_a, in_b)) out.emplace_back(cuts[i], cuts[i + 1]);
  }
  return IntervalUnion(a.ambient(), std::move(out));
}

}  // namespace

void IntervalUnion::require_same_ambient(const IntervalUnion& other) const {
  if (ambient_ != other.ambient_)
    throw std::invalid_argument("IntervalUnion: ambient mismatch (" + ambient_.str() + " vs " +
                                other.ambient_.str() + ")");
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  require_same_ambient(other);
  return combine(*this, other, [](bool x, bool y) { return x || y; });
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
  require_same_ambient(other);
  return combine(*this, other, [](bool x, bool y) { return x && y; });
}

IntervalUnion IntervalUnion::difference(const IntervalUnion& other) const {
  require_same_ambient(other);
  return combine(*this, other, [](bool x, bool y) { return x && !y; });
}

IntervalUnion IntervalUnion::complement() const {
  return whole(ambient_).difference(*this);
}

bool IntervalUnion::ae_equal(const IntervalUnion& other) const {
  require_same_ambient(other);
  return pieces_ == other.pieces_;
}

Rational IntervalUnion::symmetric_difference_measure(const IntervalUnion& other) const {
  return difference(other).measure() + other.difference(*this).measure();
}

std::string IntervalUnion::str() const {
  if (pieces_.empty()) return "{}";
  std::string s;
  for (const auto& p : pieces_) {
    if (!s.empty()) s += " u ";
    s += "[" + p.lo.str() + "," + p.hi.str() + ")";
  }
  return s;
}

}  // namespace ckpf
