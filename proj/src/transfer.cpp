#include "ckpf/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ckpf {

namespace {

// one branch term of the expanded form: chi_{D_i} * phi_i * (phi o f_i)
void add_expanded_term(const OperatorTable& table, std::size_t i, const GridFunction& phi,
                       GridFunction& acc) {
  for (std::size_t k = 0; k < acc.cells(); ++k) {
    std::size_t dst = table.branch_image_cell(i, k);
    if (dst == OperatorTable::npos) continue;
    acc[k] += table.forward_derivative_at(i, k) * phi[dst];
  }
}

}  // namespace

TransferResult transfer_apply(const OperatorTable& table, const GridFunction& phi,
                              std::size_t truncation) {
  const BranchingSystem& sys = table.system();
  if (truncation == 0 || truncation > sys.branch_count())
    throw std::invalid_argument("transfer_apply: truncation must be in 1..branch_count");
  double worst = phi.min_value();
  if (worst < -1e-12) throw NegativeInputError(worst);
  GridFunction input = phi;
  if (worst < 0.0)
    for (auto& v : input.values()) v = std::max(v, 0.0);

  GridFunction root = input.sqrt_cellwise();
  GridFunction squared_form = table.zeros();
  GridFunction expanded = table.zeros();
  for (std::size_t i = 1; i <= truncation; ++i) {
    GridFunction term = table.apply_generator_adjoint(i, root);
    squared_form += term.square_cellwise();
    add_expanded_term(table, i, input, expanded);
  }

  double agree = 0.0, agree_abs = 0.0;
  for (std::size_t k = 0; k < expanded.cells(); ++k) {
    double a = squared_form[k], b = expanded[k];
    double dev = std::abs(a - b);
    agree_abs = std::max(agree_abs, dev);
    agree = std::max(agree, dev / std::max(1.0, std::max(std::abs(a), std::abs(b))));
  }
  if (agree > 1e-12)
    throw std::logic_error("transfer_apply: squared-adjoint and expanded forms disagree by " +
                           std::to_string(agree));
  return {std::move(expanded), agree, agree_abs};
}

PreimageResult preimage_of_interval(const BranchingSystem& sys, const IntervalUnion& set,
                                    std::size_t truncation) {
  if (set.ambient() != sys.ambient())
    throw std::invalid_argument("preimage_of_interval: ambient mismatch");
  if (truncation > sys.branch_count())
    throw std::invalid_argument("preimage_of_interval: truncation exceeds branch count");
  IntervalUnion out(sys.ambient());
  double bound = 0.0;
  constexpr unsigned kDyadicBits = 40;
  for (std::size_t i = 1; i <= truncation; ++i) {
    const BranchMap& b = sys.branch(i);
    IntervalUnion clipped = set.intersect(b.domain());
    for (const auto& p : b.pieces()) {
      IntervalUnion seg = clipped.intersect(
          IntervalUnion(sys.ambient(), {{p.source_lo(), p.source_hi()}}));
      for (const auto& piece : seg.pieces()) {
        Rational lo_img, hi_img;
        if (p.is_affine()) {
          lo_img = *p.forward_exact(piece.lo);
          hi_img = *p.forward_exact(piece.hi);
          if (lo_img > hi_img) std::swap(lo_img, hi_img);
        } else {
          double a = p.forward(piece.lo.to_double());
          double c = p.forward(piece.hi.to_double());
          if (a > c) std::swap(a, c);
          lo_img = round_to_dyadic(a, kDyadicBits);
          hi_img = round_to_dyadic(c, kDyadicBits);
          bound = std::max(bound, std::ldexp(1.0, -static_cast<int>(kDyadicBits + 1)) +
                                      1e-15 * std::max(std::abs(a), std::abs(c)));
          // keep rounded endpoints inside the piece target
          lo_img = std::max(lo_img, p.target_lo(), [](const Rational& x, const Rational& y) { return x < y; });
          hi_img = std::min(hi_img, p.target_hi(), [](const Rational& x, const Rational& y) { return x < y; });
          if (!(lo_img < hi_img)) continue;
        }
        out = out.unite(IntervalUnion(sys.ambient(), {{lo_img, hi_img}}));
      }
    }
  }
  return {std::move(out), bound};
}

DefiningResidual defining_residual(const OperatorTable& table, const GridFunction& phi,
                                   const IntervalUnion& set, std::size_t truncation) {
  DefiningResidual r;
  TransferResult pushed = transfer_apply(table, phi, truncation);
  r.lhs = pushed.density.integral_over(set);
  PreimageResult pre = preimage_of_interval(table.system(), set, truncation);
  r.rhs = phi.integral_over(pre.set);
  r.residual = std::abs(r.lhs - r.rhs);
  r.endpoint_rounding_bound = pre.endpoint_rounding_bound;
  return r;
}

MonteCarloResult monte_carlo_pushforward(const BranchingSystem& sys, const GridFunction& phi,
                                         std::size_t samples, std::uint64_t seed,
                                         std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("monte_carlo_pushforward: need at least one bin");
  if (phi.min_value() < -1e-12) throw NegativeInputError(phi.min_value());
  double mass = phi.integral();
  if (mass <= 0.0) throw ZeroMassError();
  GridFunction estimate(phi.ambient(), bins);
  if (samples == 0) return {std::move(estimate), true};

  // inverse CDF over the piecewise-constant density
  std::vector<double> cum(phi.cells() + 1, 0.0);
  double h = phi.cell_width();
  for (std::size_t k = 0; k < phi.cells(); ++k)
    cum[k + 1] = cum[k] + std::max(0.0, phi[k]) * h;
  double total = cum.back();

  std::mt19937_64 rng(seed);
  double bin_width = estimate.cell_width();
  std::vector<std::uint64_t> counts(bins, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    double u = uniform_unit(rng()) * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t k = std::min<std::size_t>(phi.cells() - 1,
                                          static_cast<std::size_t>(it - cum.begin()) - 1);
    double dens = std::max(0.0, phi[k]);
    double x = k * h + (dens > 0.0 ? (u - cum[k]) / dens : 0.5 * h);
    double y = sys.coarse_map(x);
    auto b = static_cast<long>(std::floor(y / bin_width));
    b = std::clamp<long>(b, 0, static_cast<long>(bins) - 1);
    counts[static_cast<std::size_t>(b)]++;
  }
  double scale = mass / (static_cast<double>(samples) * bin_width);
  for (std::size_t b = 0; b < bins; ++b)
    estimate[b] = static_cast<double>(counts[b]) * scale;
  return {std::move(estimate), false};
}

std::string TransferMatrixResult::status_str() const {
  switch (status) {
    case Status::Ok:
      return "ok";
    case Status::NonconstantDerivative:
      return "nonconstant-derivative(branch " + std::to_string(offending_branch) + ")";
    case Status::RowNotFinite:
      return "row-not-finite(row " + std::to_string(offending_branch) + ")";
  }
  return "?";
}

TransferMatrixResult transfer_matrix(const BranchingSystem& sys, std::size_t n_block) {
  TransferMatrixResult res;
  if (n_block == 0 || n_block > sys.branch_count())
    throw std::invalid_argument("transfer_matrix: block size must be in 1..branch_count");

  std::vector<Rational> b_const;
  for (std::size_t z = 1; z <= n_block; ++z) {
    if (!sys.matrix().row_finite(z)) {
      res.status = TransferMatrixResult::Status::RowNotFinite;
      res.offending_branch = z;
      return res;
    }
    std::optional<Rational> bz;
    for (const auto& p : sys.branch(z).pieces()) {
      auto c = p.constant_forward_derivative();
      if (!c.has_value() || (bz.has_value() && *c != *bz)) {
        res.status = TransferMatrixResult::Status::NonconstantDerivative;
        res.offending_branch = z;
        return res;
      }
      bz = *c;
    }
    b_const.push_back(*bz);
  }

  res.entries.assign(n_block, std::vector<Rational>(n_block, Rational(0)));
  for (std::size_t j = 1; j <= n_block; ++j)
    for (std::size_t z = 1; z <= n_block; ++z)
      res.entries[j - 1][z - 1] =
          b_const[z - 1] * Rational(sys.matrix().entry(z, j));

  // cross-check each column against the grid transfer of the indicator
  GridChoice grid = aligned_cells(sys);
  OperatorTable table(sys, grid.cells);
  for (std::size_t z = 1; z <= n_block; ++z) {
    GridFunction chi = GridFunction::indicator(sys.branch(z).range(), grid.cells);
    GridFunction pushed = transfer_apply(table, chi, sys.branch_count()).density;
    GridFunction reconstructed(sys.ambient(), grid.cells);
    for (std::size_t j = 1; j <= n_block; ++j) {
      GridFunction chi_j = GridFunction::indicator(sys.branch(j).range(), grid.cells);
      reconstructed += chi_j * res.entries[j - 1][z - 1].to_double();
    }
    res.column_check_residual =
        std::max(res.column_check_residual, (pushed - reconstructed).norm_sup());
  }
  return res;
}

InvariantDensityResult invariant_density(const OperatorTable& table, const GridFunction& rho0,
                                         std::size_t max_iters, double tol_l1) {
  if (rho0.min_value() < -1e-12) throw NegativeInputError(rho0.min_value());
  if (std::abs(rho0.norm_l1() - 1.0) > 1e-9)
    throw std::invalid_argument("invariant_density: initial density must have unit mass");
  InvariantDensityResult res{rho0, 0, false, {}};
  const std::size_t all = table.system().branch_count();
  GridFunction rho = rho0;
  for (std::size_t k = 1; k <= max_iters; ++k) {
    GridFunction next = transfer_apply(table, rho, all).density;
    double mass = next.norm_l1();
    if (mass <= 0.0) throw ZeroMassError();
    next *= 1.0 / mass;
    double step = (next - rho).norm_l1();
    rho = std::move(next);
    res.step_l1.push_back(step);
    res.iterations = k;
    if (step <= tol_l1) {
      res.converged = true;
      break;
    }
  }
  res.density = std::move(rho);
  return res;
}

TruncationReport truncation_study(const OperatorTable& table, const GridFunction& phi,
                                  std::vector<std::size_t> truncations,
                                  const std::vector<IntervalUnion>& test_sets) {
  const BranchingSystem& sys = table.system();
  if (phi.min_value() < -1e-12) throw NegativeInputError(phi.min_value());
  std::sort(truncations.begin(), truncations.end());
  truncations.erase(std::unique(truncations.begin(), truncations.end()), truncations.end());
  if (truncations.empty() || truncations.front() == 0 ||
      truncations.back() > sys.branch_count())
    throw std::invalid_argument("truncation_study: truncations must be in 1..branch_count");

  double outside = phi.integral_over(sys.declared_range_support().complement());
  if (outside > 1e-9) throw SupportViolationError(outside);

  TruncationReport rep;
  rep.truncations = truncations;

  GridFunction acc = table.zeros();
  IntervalUnion covered(sys.ambient());
  std::size_t prev_branch = 0;
  GridFunction prev_sum = acc;
  bool have_prev = false;
  for (std::size_t n : truncations) {
    for (std::size_t i = prev_branch + 1; i <= n; ++i) {
      add_expanded_term(table, i, phi, acc);
      covered = covered.unite(sys.branch(i).range());
    }
    prev_branch = n;
    if (have_prev) {
      for (std::size_t k = 0; k < acc.cells(); ++k)
        if (acc[k] < prev_sum[k] - 1e-12) rep.monotonicity_violations++;
    }
    prev_sum = acc;
    have_prev = true;
    rep.partial_sums.push_back(acc);
    rep.missing_mass.push_back(phi.integral_over(covered.complement()));
  }
  const GridFunction& deepest = rep.partial_sums.back();
  for (const auto& s : rep.partial_sums) rep.l1_errors.push_back((s - deepest).norm_l1());

  for (const auto& set : test_sets) {
    DefiningResidual r = defining_residual(table, phi, set, truncations.back());
    rep.defining_residuals.emplace_back(set.str(), r.residual);
  }
  return rep;
}

}  // namespace ckpf
