#include "ckpf/ck_operators.hpp"

#include <algorithm>
#include <cmath>

namespace ckpf {

OperatorTable::OperatorTable(const BranchingSystem& sys, std::size_t cells)
    : sys_(&sys), cells_(cells) {
  if (cells < 2) throw std::invalid_argument("OperatorTable: need at least two cells");
  GridFunction probe(sys.ambient(), cells);
  tables_.reserve(sys.branch_count());
  for (const auto& b : sys.branches()) {
    BranchTable t{std::vector<double>(cells, 0.0), std::vector<std::size_t>(cells, npos),
                  std::vector<double>(cells, 0.0), std::vector<std::size_t>(cells, npos),
                  GridFunction(sys.ambient(), cells), GridFunction(sys.ambient(), cells)};
    for (std::size_t k = 0; k < cells; ++k) {
      Rational m = probe.midpoint_exact(k);
      t.chi_domain[k] = b.domain().contains(m) ? 1.0 : 0.0;
      t.chi_range[k] = b.range().contains(m) ? 1.0 : 0.0;
      if (const BranchPiece* p = b.piece_for_target(m)) {
        t.gen_weight[k] = std::sqrt(p->inverse_derivative(m.to_double()));
        t.gen_src[k] = probe.cell_index(p->inverse_exact(m));  // exact for all piece kinds
      }
      if (const BranchPiece* p = b.piece_for_source(m)) {
        t.adj_weight[k] = std::sqrt(p->forward_derivative(m.to_double()));
        if (auto img = p->forward_exact(m)) {
          t.adj_dst[k] = probe.cell_index(*img);
        } else {
          double y = p->forward(m.to_double());
          auto idx = static_cast<long>(std::floor(y / probe.cell_width()));
          idx = std::clamp<long>(idx, 0, static_cast<long>(cells) - 1);
          t.adj_dst[k] = static_cast<std::size_t>(idx);
        }
      }
    }
    tables_.push_back(std::move(t));
  }
}

GridFunction OperatorTable::apply_generator(std::size_t i, const GridFunction& phi) const {
  if (i == 0 || i > tables_.size()) throw std::invalid_argument("apply_generator: bad index");
  if (phi.cells() != cells_ || phi.ambient() != sys_->ambient())
    throw std::invalid_argument("apply_generator: grid mismatch");
  const BranchTable& t = tables_[i - 1];
  GridFunction out(sys_->ambient(), cells_);
  for (std::size_t k = 0; k < cells_; ++k)
    if (t.gen_weight[k] != 0.0) out[k] = t.gen_weight[k] * phi[t.gen_src[k]];
  return out;
}

GridFunction OperatorTable::apply_generator_adjoint(std::size_t i, const GridFunction& psi) const {
  if (i == 0 || i > tables_.size()) throw std::invalid_argument("apply_generator_adjoint: bad index");
  if (psi.cells() != cells_ || psi.ambient() != sys_->ambient())
    throw std::invalid_argument("apply_generator_adjoint: grid mismatch");
  const BranchTable& t = tables_[i - 1];
  GridFunction out(sys_->ambient(), cells_);
  for (std::size_t k = 0; k < cells_; ++k)
    if (t.adj_weight[k] != 0.0) out[k] = t.adj_weight[k] * psi[t.adj_dst[k]];
  return out;
}

const GridFunction& OperatorTable::domain_indicator(std::size_t i) const {
  return tables_.at(i - 1).chi_domain;
}

const GridFunction& OperatorTable::range_indicator(std::size_t i) const {
  return tables_.at(i - 1).chi_range;
}

double OperatorTable::forward_derivative_at(std::size_t i, std::size_t cell) const {
  double w = tables_.at(i - 1).adj_weight[cell];
  return w * w;
}

std::size_t OperatorTable::branch_image_cell(std::size_t i, std::size_t cell) const {
  return tables_.at(i - 1).adj_dst[cell];
}

bool grid_is_aligned(const BranchingSystem& sys, std::size_t cells) {
  Rational n(static_cast<long>(cells));
  auto on_boundary = [&](const Rational& p) {
    return (p * n / sys.ambient()).is_integer();
  };
  for (const auto& b : sys.branches()) {
    for (const auto& pc : b.pieces())
      if (!on_boundary(pc.source_lo()) || !on_boundary(pc.source_hi()) ||
          !on_boundary(pc.target_lo()) || !on_boundary(pc.target_hi()))
        return false;
    for (const auto& p : b.domain().pieces())
      if (!on_boundary(p.lo) || !on_boundary(p.hi)) return false;
    for (const auto& p : b.range().pieces())
      if (!on_boundary(p.lo) || !on_boundary(p.hi)) return false;
  }
  return true;
}

GridChoice aligned_cells(const BranchingSystem& sys, std::size_t min_cells) {
  std::size_t base = 1;
  if (sys.ambient().is_integer()) base = static_cast<std::size_t>(sys.ambient().floor_i64());
  std::size_t fallback = 0;
  for (int j = 0; j < 40; ++j) {
    std::size_t n = base << j;
    if (n < min_cells) continue;
    if (fallback == 0) fallback = n;
    if (grid_is_aligned(sys, n)) return {n, true};
    if (n > (min_cells << 12)) break;  // give up well past any dyadic structure
  }
  return {fallback ? fallback : min_cells, false};
}

std::size_t resolvable_block(const BranchingSystem& sys, std::size_t cells) {
  double max_expansion = 1.0;
  for (const auto& b : sys.branches())
    for (const auto& p : b.pieces()) {
      if (auto s = p.constant_forward_derivative()) {
        max_expansion = std::max(max_expansion, 1.0 / s->to_double());
      } else {
        // bound |F'| = inverse derivative over the target
        double lo = p.target_lo().to_double(), hi = p.target_hi().to_double();
        max_expansion = std::max({max_expansion, p.inverse_derivative(lo), p.inverse_derivative(hi)});
      }
    }
  std::size_t block = 1;
  while (static_cast<double>(block) < max_expansion) block <<= 1;
  while (block > 1 && cells % block != 0) block >>= 1;
  return block;
}

const RelationReport::Entry* RelationReport::worst_failure() const {
  const Entry* worst = nullptr;
  for (const auto& e : entries)
    if (!e.skipped && !e.pass && (!worst || e.residual > worst->residual)) worst = &e;
  return worst;
}

RelationReport verify_ck_relations(const OperatorTable& table,
                                   const std::vector<GridFunction>& test_fns,
                                   const std::vector<UVPair>& uv_pairs, double tol) {
  RelationReport rep;
  rep.tolerance = tol;
  const BranchingSystem& sys = table.system();
  const std::size_t nb = sys.branch_count();

  auto range_proj = [&](std::size_t j, const GridFunction& f) {
    return table.apply_generator(j, table.apply_generator_adjoint(j, f));  // S_j S_j*
  };
  auto domain_proj = [&](std::size_t i, const GridFunction& f) {
    return table.apply_generator_adjoint(i, table.apply_generator(i, f));  // S_i* S_i
  };
  auto finish = [&](RelationReport::Entry e) {
    if (!e.skipped) {
      e.pass = e.residual <= tol;
      rep.max_residual[e.relation] = std::max(rep.max_residual[e.relation], e.residual);
      if (!e.pass) rep.pass = false;
    }
    rep.entries.push_back(std::move(e));
  };

  for (std::size_t i = 1; i <= nb; ++i)
    for (std::size_t j = 1; j <= nb; ++j) {
      if (i == j) continue;
      RelationReport::Entry e;
      e.relation = 1;
      e.subject = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (const auto& phi : test_fns)
        e.residual = std::max(e.residual, range_proj(i, range_proj(j, phi)).norm_l2());
      finish(std::move(e));
    }

  for (std::size_t i = 1; i <= nb; ++i)
    for (std::size_t j = i + 1; j <= nb; ++j) {
      RelationReport::Entry e;
      e.relation = 2;
      e.subject = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (const auto& phi : test_fns) {
        GridFunction ab = domain_proj(i, domain_proj(j, phi));
        GridFunction ba = domain_proj(j, domain_proj(i, phi));
        e.residual = std::max(e.residual, (ab - ba).norm_l2());
      }
      finish(std::move(e));
    }

  for (std::size_t i = 1; i <= nb; ++i)
    for (std::size_t j = 1; j <= nb; ++j) {
      RelationReport::Entry e;
      e.relation = 3;
      e.subject = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      double a_ij = sys.matrix().entry(i, j);
      for (const auto& phi : test_fns) {
        GridFunction proj = range_proj(j, phi);
        GridFunction lhs = domain_proj(i, proj);
        GridFunction rhs = proj * a_ij;
        e.residual = std::max(e.residual, (lhs - rhs).norm_l2());
      }
      finish(std::move(e));
    }

  for (const auto& uv : uv_pairs) {
    RelationReport::Entry e;
    e.relation = 4;
    e.subject = uv.str();
    auto support = sys.matrix().matching_columns(uv.rows_one, uv.rows_zero);
    if (!support.has_value()) {
      e.skipped = true;
      e.note = "match set not provably finite; relation vacuous";
      rep.entries.push_back(std::move(e));
      continue;
    }
    bool beyond = std::any_of(support->begin(), support->end(),
                              [nb](std::size_t j) { return j > nb; });
    for (std::size_t u : uv.rows_one) beyond = beyond || u > nb;
    for (std::size_t v : uv.rows_zero) beyond = beyond || v > nb;
    if (beyond) {
      e.skipped = true;
      e.note = "support exceeds the instantiated truncation";
      rep.entries.push_back(std::move(e));
      continue;
    }
    for (const auto& phi : test_fns) {
      GridFunction lhs = phi;
      for (std::size_t u : uv.rows_one) lhs = domain_proj(u, lhs);
      for (std::size_t v : uv.rows_zero) lhs = lhs - domain_proj(v, lhs);
      GridFunction rhs(sys.ambient(), table.cells());
      for (std::size_t j : *support) rhs += range_proj(j, phi);
      e.residual = std::max(e.residual, (lhs - rhs).norm_l2());
    }
    finish(std::move(e));
  }

  return rep;
}

}  // namespace ckpf
