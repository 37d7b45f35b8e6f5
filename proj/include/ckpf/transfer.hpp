#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckpf/ck_operators.hpp"

namespace ckpf {

struct NegativeInputError : std::invalid_argument {
  explicit NegativeInputError(double worst)
      : std::invalid_argument("transfer operator input has a negative cell value " +
                              std::to_string(worst)),
        worst_value(worst) {}
  double worst_value;
};

struct ZeroMassError : std::invalid_argument {
  ZeroMassError() : std::invalid_argument("density has zero mass") {}
};

struct SupportViolationError : std::invalid_argument {
  explicit SupportViolationError(double mass)
      : std::invalid_argument("input carries mass " + std::to_string(mass) +
                              " outside the declared range support"),
        outside_mass(mass) {}
  double outside_mass;
};

/// Result of one transfer-operator application. The operator is computed two
/// ways -- as the sum of squared adjoint images of sqrt(input), and in the
/// expanded derivative-weighted composition form -- and the two are
/// cross-checked cell by cell; `form_agreement_max` records the worst
/// deviation (a pure floating-point quantity, the forms are algebraically
/// identical).
struct TransferResult {
  GridFunction density;
  double form_agreement_max = 0.0;      // max relative deviation between the forms
  double form_agreement_abs = 0.0;      // max absolute deviation between the forms
};

/// P phi = sum_{i<=truncation} (S_i* sqrt(phi))^2, the density pushforward
/// under the coarse map. Input must be nonnegative (cells below -1e-12
/// raise NegativeInputError; smaller dips clamp to zero).
TransferResult transfer_apply(const OperatorTable& table, const GridFunction& phi,
                              std::size_t truncation);

/// Exact preimage of an interval union under the coarse map, restricted to
/// the first `truncation` branch ranges: the union of branch images of
/// (set n D_i). Affine pieces map endpoints exactly; parabolic-side pieces
/// produce irrational endpoints, stored as nearest dyadics with denominator
/// 2^40 and the rounding recorded in `endpoint_rounding_bound`.
struct PreimageResult {
  IntervalUnion set;
  double endpoint_rounding_bound = 0.0;
};
PreimageResult preimage_of_interval(const BranchingSystem& sys, const IntervalUnion& set,
                                    std::size_t truncation);

/// | integral_A P(phi) - integral_{F^-1 A} phi |, both sides by
/// midpoint-quadrature / exact-length integration.
struct DefiningResidual {
  double lhs = 0.0;  // integral of the transferred density over the set
  double rhs = 0.0;  // integral of the input over the preimage
  double residual = 0.0;
  double endpoint_rounding_bound = 0.0;
};
DefiningResidual defining_residual(const OperatorTable& table, const GridFunction& phi,
                                   const IntervalUnion& set, std::size_t truncation);

/// Independent sampling oracle: draw from the normalized density phi by
/// inverse CDF on the grid, push each sample through the coarse map,
/// histogram into `bins` cells, and rescale by the input mass. Zero samples
/// return the zero estimate with `zero_samples` set.
struct MonteCarloResult {
  GridFunction estimate;
  bool zero_samples = false;
};
MonteCarloResult monte_carlo_pushforward(const BranchingSystem& sys, const GridFunction& phi,
                                         std::size_t samples, std::uint64_t seed,
                                         std::size_t bins);

/// Matrix of the transfer operator on span{chi_{R_1}, ..., chi_{R_n_block}}
/// in the indicator coordinates: entry (j,z) = b_z * A(z,j) where b_z is the
/// constant branch derivative. Requires every used matrix row to be finite
/// and every branch derivative to be constant; violations are reported as
/// statuses, not exceptions. `column_check_residual` is the sup-norm
/// deviation of each matrix column from the grid expansion of the
/// transferred indicator.
struct TransferMatrixResult {
  enum class Status { Ok, NonconstantDerivative, RowNotFinite };
  Status status = Status::Ok;
  std::size_t offending_branch = 0;
  std::vector<std::vector<Rational>> entries;  // [j][z], 0-based storage
  double column_check_residual = 0.0;

  bool ok() const { return status == Status::Ok; }
  std::string status_str() const;
};
TransferMatrixResult transfer_matrix(const BranchingSystem& sys, std::size_t n_block);

/// Fixed-point iteration of the transfer operator with L1 renormalization.
/// Starts from a probability density (mass 1 within 1e-9), stops when the
/// successive L1 change drops to tol_l1 or the iteration budget runs out.
struct InvariantDensityResult {
  GridFunction density;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> step_l1;  // successive-change history
};
InvariantDensityResult invariant_density(const OperatorTable& table, const GridFunction& rho0,
                                         std::size_t max_iters, double tol_l1);

/// Truncation-convergence study: partial sums of the transfer operator at
/// each requested truncation, L1 distances to the deepest one, pointwise
/// monotonicity violations (nonnegative input makes the sums nondecreasing),
/// per-truncation missing mass, and defining-identity residuals on the
/// supplied test sets at the deepest truncation. Raises
/// SupportViolationError when the input carries more than 1e-9 of mass
/// outside the system's declared range support.
struct TruncationReport {
  std::vector<std::size_t> truncations;
  std::vector<GridFunction> partial_sums;          // parallel to truncations
  std::vector<double> l1_errors;                   // distance to deepest sum
  std::vector<double> missing_mass;                // input mass beyond union of first N ranges
  std::size_t monotonicity_violations = 0;         // cells decreasing beyond 1e-12
  std::vector<std::pair<std::string, double>> defining_residuals;  // per test set
};
TruncationReport truncation_study(const OperatorTable& table, const GridFunction& phi,
                                  std::vector<std::size_t> truncations,
                                  const std::vector<IntervalUnion>& test_sets);

}  // namespace ckpf
