#include "ckpf/branching_system.hpp"

#include <algorithm>
#include <cmath>

namespace ckpf {

std::string UVPair::str() const {
  auto set_str = [](const std::vector<std::size_t>& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(s[k]);
    }
    return out + "}";
  };
  return "U=" + set_str(rows_one) + " V=" + set_str(rows_zero);
}

void ValidationReport::add(Entry e) {
  if (!e.skipped && !e.pass) overall_pass = false;
  entries.push_back(std::move(e));
}

std::vector<const ValidationReport::Entry*> ValidationReport::condition(int c) const {
  std::vector<const Entry*> out;
  for (const auto& e : entries)
    if (e.condition == c) out.push_back(&e);
  return out;
}

const ValidationReport::Entry* ValidationReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.skipped && !e.pass) return &e;
  return nullptr;
}

BranchingSystem::BranchingSystem(Rational ambient, std::vector<BranchMap> branches,
                                 ZeroOneMatrix matrix, std::string name)
    : ambient_(std::move(ambient)),
      branches_(std::move(branches)),
      matrix_(std::move(matrix)),
      name_(std::move(name)),
      instantiated_ranges_(ambient_),
      declared_range_support_(ambient_) {
  if (branches_.empty()) throw std::invalid_argument("BranchingSystem: no branches");
  std::sort(branches_.begin(), branches_.end(),
            [](const BranchMap& a, const BranchMap& b) { return a.index() < b.index(); });
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    if (branches_[k].index() != k + 1)
      throw std::invalid_argument("BranchingSystem: branch indices must be 1..N without gaps");
    if (branches_[k].domain().ambient() != ambient_)
      throw std::invalid_argument("BranchingSystem: branch ambient mismatch");
    instantiated_ranges_ = instantiated_ranges_.unite(branches_[k].range());
  }
  declared_range_support_ = instantiated_ranges_;
  for (const auto& b : branches_)
    for (const auto& p : b.pieces())
      target_index_.push_back({p.target_lo().to_double(), p.target_hi().to_double(),
                               p.target_lo(), p.target_hi(), b.index() - 1, &p});
  std::sort(target_index_.begin(), target_index_.end(),
            [](const TargetSlot& a, const TargetSlot& b) { return a.lo_r < b.lo_r; });
  for (std::size_t k = 1; k < target_index_.size(); ++k)
    if (target_index_[k].lo_r < target_index_[k - 1].hi_r)
      throw std::invalid_argument("BranchingSystem: piece targets of distinct branches overlap");
}

const BranchMap& BranchingSystem::branch(std::size_t i) const {
  if (i == 0 || i > branches_.size())
    throw std::invalid_argument("BranchingSystem: branch index out of range");
  return branches_[i - 1];
}

void BranchingSystem::declare_range_support(IntervalUnion s) {
  if (s.ambient() != ambient_)
    throw std::invalid_argument("BranchingSystem: range support ambient mismatch");
  declared_range_support_ = std::move(s);
}

double BranchingSystem::coarse_map(double x) const {
  // binary search the sorted target slots
  std::size_t lo = 0, hi = target_index_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (target_index_[mid].lo <= x)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo > 0) {
    const TargetSlot& s = target_index_[lo - 1];
    if (x < s.hi) return s.piece->inverse(x);
  }
  return x;  // identity off every piece target
}

Rational BranchingSystem::coarse_map_exact(const Rational& x) const {
  for (const auto& s : target_index_) {
    if (x < s.lo_r) break;
    if (x < s.hi_r) return s.piece->inverse_exact(x);
  }
  return x;
}

double BranchingSystem::eval_branch(std::size_t i, double x) const { return branch(i).forward(x); }

double BranchingSystem::eval_branch_derivative(std::size_t i, double x) const {
  const BranchMap& b = branch(i);
  const BranchPiece* p = b.piece_for_source(x);
  if (!p) throw OutOfDomainError(i, x);
  return p->forward_derivative(x);
}

double BranchingSystem::eval_inverse_derivative(std::size_t i, double y) const {
  const BranchMap& b = branch(i);
  const BranchPiece* p = b.piece_for_target(y);
  if (!p) throw OutOfDomainError(i, y);
  return p->inverse_derivative(y);
}

ValidationReport BranchingSystem::validate(std::size_t grid_points_per_branch,
                                           const std::vector<UVPair>& uv_pairs) const {
  ValidationReport rep;
  const std::size_t nb = branches_.size();

  // Condition 1: piece sources tile D_i; piece targets tile R_i minus the
  // declared truncation shortfall.
  for (const auto& b : branches_) {
    ValidationReport::Entry e;
    e.condition = 1;
    e.subject = "branch " + std::to_string(b.index());
    bool src_ok = b.covered_domain().ae_equal(b.domain());
    IntervalUnion expected_range = b.range().difference(b.range_shortfall());
    bool tgt_ok = b.covered_range().ae_equal(expected_range);
    e.pass = src_ok && tgt_ok;
    if (!src_ok)
      e.note = "piece sources cover " + b.covered_domain().str() + ", domain is " + b.domain().str();
    else if (!tgt_ok)
      e.note = "piece targets cover " + b.covered_range().str();
    else if (!b.range_shortfall().empty())
      e.note = "truncation shortfall " + b.range_shortfall().str();
    rep.add(std::move(e));
  }

  // Condition 2: F inverts every branch on sampled interior points.
  for (const auto& b : branches_) {
    double worst = 0.0;
    for (const auto& p : b.pieces()) {
      const std::size_t pts = std::max<std::size_t>(grid_points_per_branch, 2);
      double lo = p.source_lo().to_double(), hi = p.source_hi().to_double();
      for (std::size_t k = 0; k < pts; ++k) {
        double x = lo + (hi - lo) * (k + 0.5) / pts;
        double rt = coarse_map(p.forward(x));
        worst = std::max(worst, std::abs(rt - x));
      }
    }
    ValidationReport::Entry e;
    e.condition = 2;
    e.subject = "branch " + std::to_string(b.index());
    e.metric = worst;
    e.pass = worst <= 1e-12;
    rep.add(std::move(e));
  }

  // Condition 3: ranges pairwise a.e.-disjoint, exact.
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j) {
      Rational m = branches_[i].range().intersect(branches_[j].range()).measure();
      ValidationReport::Entry e;
      e.condition = 3;
      e.subject = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      e.pass = m.is_zero();
      e.metric = m.to_double();
      if (!e.pass) e.note = "measure(R_i n R_j) = " + m.str();
      rep.add(std::move(e));
    }

  // Condition 4: matrix compatibility of ranges with domains.
  for (std::size_t i = 1; i <= nb; ++i)
    for (std::size_t j = 1; j <= nb; ++j) {
      const IntervalUnion& Rj = branch(j).range();
      const IntervalUnion& Di = branch(i).domain();
      ValidationReport::Entry e;
      e.condition = 4;
      e.subject = "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (matrix_.entry(i, j) == 0) {
        Rational m = Rj.intersect(Di).measure();
        e.pass = m.is_zero();
        e.metric = m.to_double();
        if (!e.pass) e.note = "entry 0 but measure(R_j n D_i) = " + m.str();
      } else {
        Rational m = Rj.difference(Di).measure();
        e.pass = m.is_zero();
        e.metric = m.to_double();
        if (!e.pass) e.note = "entry 1 but measure(R_j \\ D_i) = " + m.str();
      }
      rep.add(std::move(e));
    }

  // Condition 5: D-intersections match R-unions for the supplied (U,V).
  for (const auto& uv : uv_pairs) {
    ValidationReport::Entry e;
    e.condition = 5;
    e.subject = uv.str();
    auto support = matrix_.matching_columns(uv.rows_one, uv.rows_zero);
    if (!support.has_value()) {
      e.skipped = true;
      e.note = "match set not provably finite; condition vacuous";
      rep.add(std::move(e));
      continue;
    }
    bool beyond = false;
    for (std::size_t u : uv.rows_one) beyond = beyond || u > nb;
    for (std::size_t v : uv.rows_zero) beyond = beyond || v > nb;
    for (std::size_t j : *support) beyond = beyond || j > nb;
    if (beyond) {
      e.skipped = true;
      e.note = "involves rows or columns beyond the instantiated truncation";
      rep.add(std::move(e));
      continue;
    }
    IntervalUnion lhs = IntervalUnion::whole(ambient_);
    for (std::size_t u : uv.rows_one) lhs = lhs.intersect(branch(u).domain());
    for (std::size_t v : uv.rows_zero) lhs = lhs.intersect(branch(v).domain().complement());
    IntervalUnion rhs(ambient_);
    for (std::size_t j : *support) rhs = rhs.unite(branch(j).range());
    Rational diff = lhs.symmetric_difference_measure(rhs);
    e.pass = diff.is_zero();
    e.metric = diff.to_double();
    if (!e.pass) e.note = "symmetric difference measure " + diff.str();
    rep.add(std::move(e));
  }

  // Condition 6: derivatives positive on open piece interiors. Structural
  // per piece construction; re-probed at interior sample points.
  for (const auto& b : branches_) {
    bool ok = true;
    double min_phi = std::numeric_limits<double>::infinity();
    for (const auto& p : b.pieces()) {
      double lo = p.source_lo().to_double(), hi = p.source_hi().to_double();
      for (std::size_t k = 0; k < 8; ++k) {
        double x = lo + (hi - lo) * (k + 0.5) / 8;
        double d = p.forward_derivative(x);
        min_phi = std::min(min_phi, d);
        ok = ok && d > 0.0 && std::isfinite(d);
      }
    }
    ValidationReport::Entry e;
    e.condition = 6;
    e.subject = "branch " + std::to_string(b.index());
    e.pass = ok;
    e.metric = min_phi;
    rep.add(std::move(e));
  }

  return rep;
}

LemmaReport BranchingSystem::lemma_check(bool cover_required) const {
  LemmaReport rep;
  const std::size_t nb = branches_.size();

  rep.ranges_pairwise_disjoint = true;
  for (std::size_t i = 0; i < nb && rep.ranges_pairwise_disjoint; ++i)
    for (std::size_t j = i + 1; j < nb; ++j)
      if (!branches_[i].range().intersect(branches_[j].range()).measure().is_zero()) {
        rep.ranges_pairwise_disjoint = false;
        break;
      }

  rep.cover_checked = cover_required;
  if (cover_required)
    rep.covers_ambient = instantiated_ranges_.ae_equal(IntervalUnion::whole(ambient_));

  for (std::size_t i = 1; i <= nb; ++i) {
    LemmaReport::RowEntry row;
    row.row = i;
    auto support = matrix_.row_support(i);
    if (!support.has_value()) {
      row.skipped = true;
      row.note = "row not finite";
    } else {
      bool beyond = std::any_of(support->begin(), support->end(),
                                [nb](std::size_t j) { return j > nb; });
      if (beyond) {
        row.skipped = true;
        row.note = "support extends beyond the truncation";
      } else {
        IntervalUnion u(ambient_);
        for (std::size_t j : *support) u = u.unite(branch(j).range());
        row.pass = branch(i).domain().ae_equal(u);
        if (!row.pass) {
          row.note = "domain " + branch(i).domain().str() + " vs range union " + u.str();
          rep.domain_decomposition_pass = false;
        }
      }
    }
    rep.rows.push_back(std::move(row));
  }

  rep.implies_conditions_4_and_5 = rep.ranges_pairwise_disjoint && rep.cover_checked &&
                                   rep.covers_ambient && rep.domain_decomposition_pass &&
                                   std::none_of(rep.rows.begin(), rep.rows.end(),
                                                [](const auto& r) { return r.skipped; });
  return rep;
}

BranchingSystem doubling_system() {
  Rational L(1);
  Rational half(1, 2);
  IntervalUnion full(L, {{Rational(0), L}});
  std::vector<BranchMap> branches;
  branches.emplace_back(
      1, full, IntervalUnion(L, {{Rational(0), half}}),
      std::vector<BranchPiece>{
          BranchPiece(Rational(0), L, Rational(0), half, AffineMap{half, Rational(0)})});
  branches.emplace_back(
      2, full, IntervalUnion(L, {{half, L}}),
      std::vector<BranchPiece>{BranchPiece(Rational(0), L, half, L, AffineMap{half, half})});
  return BranchingSystem(L, std::move(branches),
                         ZeroOneMatrix::explicit_block({{1, 1}, {1, 1}}, 2), "doubling");
}

BranchingSystem standard_system(const ZeroOneMatrix& matrix, std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("standard_system: n_max must be >= 1");
  Rational L(static_cast<long>(n_max) + 1);
  std::vector<BranchMap> branches;
  for (std::size_t i = 1; i <= n_max; ++i) {
    auto declared = matrix.row_support(i);
    std::vector<std::size_t> cols;
    bool geometric = !declared.has_value();
    if (declared.has_value()) {
      for (std::size_t j : *declared)
        if (j <= n_max) cols.push_back(j);
    } else {
      for (std::size_t j = 1; j <= n_max; ++j) cols.push_back(j);
    }
    if (cols.empty()) throw ZeroRowError(i);

    Rational range_lo(static_cast<long>(i));
    std::vector<BranchPiece> pieces;
    std::vector<std::pair<Rational, Rational>> dom_pieces;
    Rational cursor = range_lo;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      // equal split for genuinely finite rows; geometric lengths 2^-(k+1)
      // for truncated infinite rows (the residual tail stays uncovered)
      Rational len = geometric ? pow2(-static_cast<int>(k) - 1)
                               : Rational(1, static_cast<long>(cols.size()));
      Rational src_lo(static_cast<long>(cols[k]));
      Rational src_hi = src_lo + Rational(1);
      Rational tgt_lo = cursor;
      Rational tgt_hi = cursor + len;
      cursor = tgt_hi;
      // increasing affine R_j -> I_k
      Rational slope = len;  // source always has unit length
      Rational intercept = tgt_lo - slope * src_lo;
      pieces.emplace_back(src_lo, src_hi, tgt_lo, tgt_hi, AffineMap{slope, intercept});
      dom_pieces.emplace_back(src_lo, src_hi);
    }
    IntervalUnion domain(L, std::move(dom_pieces));
    IntervalUnion range(L, {{range_lo, range_lo + Rational(1)}});
    branches.emplace_back(i, std::move(domain), std::move(range), std::move(pieces));
  }
  BranchingSystem sys(L, std::move(branches), matrix, "standard");
  sys.declare_range_support(IntervalUnion(L, {{Rational(1), L}}));
  return sys;
}

BranchingSystem o_infinity_system(std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("o_infinity_system: n_max must be >= 1");
  Rational L(1);
  IntervalUnion full(L, {{Rational(0), L}});
  // a_1 = 0, a_m = a_{m-1} + 2^-m; b_m = (a_m + a_{m+1})/2
  std::size_t m_max = n_max / 2 + 2;
  std::vector<Rational> a(m_max + 2), b(m_max + 1);
  a[1] = Rational(0);
  for (std::size_t m = 2; m < a.size(); ++m) a[m] = a[m - 1] + pow2(-static_cast<int>(m));
  for (std::size_t m = 1; m < b.size(); ++m) b[m] = (a[m] + a[m + 1]) / Rational(2);

  std::vector<BranchMap> branches;
  for (std::size_t i = 1; i <= n_max; ++i) {
    std::size_t m = (i + 1) / 2;
    Rational lo = (i % 2 == 1) ? a[m] : b[m];
    Rational hi = (i % 2 == 1) ? b[m] : a[m + 1];
    Rational len = hi - lo;
    std::vector<BranchPiece> pieces{
        BranchPiece(Rational(0), Rational(1), lo, hi, AffineMap{len, lo})};
    branches.emplace_back(i, full, IntervalUnion(L, {{lo, hi}}), std::move(pieces));
  }
  BranchingSystem sys(L, std::move(branches), ZeroOneMatrix::full_ones(n_max), "o-infinity");
  // ranges accumulate toward 1/2: declare the limit union, not the truncation
  sys.declare_range_support(IntervalUnion(L, {{Rational(0), Rational(1, 2)}}));
  return sys;
}

BranchingSystem quadratic_system(std::size_t n_max, const Rational& ambient_l) {
  if (n_max == 0) throw std::invalid_argument("quadratic_system: n_max must be >= 1");
  Rational need(static_cast<long>((n_max + 1) / 2));
  if (ambient_l < need)
    throw std::invalid_argument("quadratic_system: ambient length " + ambient_l.str() +
                                " too small for the domains (need >= " + need.str() + ")");
  std::vector<BranchMap> branches;
  for (std::size_t i = 1; i <= n_max; ++i) {
    Rational r_hi(static_cast<long>(i));
    if (r_hi > ambient_l) break;  // range does not fit; branch not instantiated
    Rational r_lo = r_hi - Rational(1);
    long c = static_cast<long>((i + 1) / 2);
    Rational coeff(c);
    bool odd = (i % 2 == 1);
    QuadraticSideMap q{coeff, odd ? r_hi : r_lo, odd ? -1 : +1};
    std::vector<BranchPiece> pieces{BranchPiece(Rational(0), coeff, r_lo, r_hi, q)};
    branches.emplace_back(i, IntervalUnion(ambient_l, {{Rational(0), coeff}}),
                          IntervalUnion(ambient_l, {{r_lo, r_hi}}), std::move(pieces));
  }
  if (branches.empty())
    throw std::invalid_argument("quadratic_system: no branch range fits in the ambient");
  return BranchingSystem(ambient_l, std::move(branches), ZeroOneMatrix::staircase(n_max),
                         "quadratic");
}

std::vector<UVPair> default_uv_pairs(const BranchingSystem& sys, std::size_t cap) {
  std::vector<UVPair> out;
  const std::size_t nb = sys.branch_count();
  for (std::size_t i = 1; i <= nb; ++i)
    if (sys.matrix().row_finite(i)) out.push_back({{i}, {}});
  std::size_t top = std::min(nb, cap);
  for (std::size_t i = 1; i <= top; ++i)
    for (std::size_t j = 1; j <= top; ++j) {
      if (i == j) continue;
      if (sys.matrix().matching_columns({i}, {j}).has_value()) out.push_back({{i}, {j}});
    }
  return out;
}

}  // namespace ckpf
