// ckpf -- branching systems, Cuntz-Krieger generator operators, and
// Perron-Frobenius transfer operators on interval measure spaces.
//
// Exit codes: 0 all checks passed / computation succeeded,
//             1 usage or configuration error,
//             2 a mathematical check failed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "ckpf/reports.hpp"
#include "ckpf/system_io.hpp"

namespace fs = std::filesystem;
using namespace ckpf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOpts {
  std::string config_path;
  std::size_t cells_override = 0;
  std::size_t n_max_override = 0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  double tol_override = 0.0;
  bool tol_set = false;
  std::string out_override;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("-c,--config", o.config_path, "run configuration file")->required();
  cmd->add_option("--cells", o.cells_override, "override grid cell count (0 = automatic aligned)");
  cmd->add_option("--n-max", o.n_max_override, "override the branch/matrix truncation bound");
  cmd->add_option("--seed", o.seed_override, "override the random seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--tol", o.tol_override, "override the relation tolerance")->each([&](const std::string&) {
    o.tol_set = true;
  });
  cmd->add_option("-o,--out", o.out_override, "override the output directory");
}

struct RunContext {
  RunConfig cfg;
  BranchingSystem sys;
  std::size_t cells = 0;
  bool aligned = false;
  fs::path out;
};

RunContext make_context(const CommonOpts& o) {
  RunConfig cfg = load_config_file(o.config_path);
  if (o.cells_override) cfg.cells = o.cells_override;
  if (o.n_max_override) cfg.n_max = o.n_max_override;
  if (o.seed_set) cfg.seed = o.seed_override;
  if (o.tol_set) cfg.tol = o.tol_override;
  if (!o.out_override.empty()) cfg.out_dir = o.out_override;
  if (cfg.cells == 1) throw std::runtime_error("config: cells must be >= 2");

  BranchingSystem sys = build_system(cfg);
  std::size_t cells = cfg.cells;
  bool aligned;
  if (cells == 0) {
    GridChoice g = aligned_cells(sys);
    cells = g.cells;
    aligned = g.aligned;
  } else {
    aligned = grid_is_aligned(sys, cells);
  }
  if (!aligned)
    std::cerr << "warning: grid of " << cells
              << " cells does not align with all system breakpoints; residuals carry "
                 "discretization error\n";
  fs::path out(cfg.out_dir);
  fs::create_directories(out);
  return RunContext{std::move(cfg), std::move(sys), cells, aligned, std::move(out)};
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

std::string header_for(const RunContext& ctx) {
  std::string h = ctx.cfg.resolved_lines();
  h += "resolved.cells = " + std::to_string(ctx.cells) + "\n";
  h += "resolved.system = " + ctx.sys.name() + "\n";
  h += "resolved.branches = " + std::to_string(ctx.sys.branch_count()) + "\n";
  return h;
}

std::vector<IntervalUnion> dyadic_eighths(const BranchingSystem& sys) {
  std::vector<IntervalUnion> out;
  for (long k = 0; k < 8; ++k)
    out.emplace_back(sys.ambient(),
                     std::vector<std::pair<Rational, Rational>>{
                         {sys.ambient() * Rational(k, 8), sys.ambient() * Rational(k + 1, 8)}});
  return out;
}

std::vector<GridFunction> seeded_test_functions(const RunContext& ctx, const OperatorTable& table) {
  std::size_t block = resolvable_block(ctx.sys, table.cells());
  std::vector<GridFunction> fns;
  for (std::size_t k = 0; k < ctx.cfg.functions; ++k)
    fns.push_back(GridFunction::random_blocks(ctx.sys.ambient(), table.cells(), block,
                                              ctx.cfg.seed + k));
  return fns;
}

std::size_t resolve_truncation(const RunContext& ctx, std::size_t requested) {
  std::size_t n = requested ? requested : ctx.cfg.truncation;
  if (n == 0) n = ctx.sys.branch_count();
  if (n > ctx.sys.branch_count())
    throw std::runtime_error("truncation " + std::to_string(n) + " exceeds the " +
                             std::to_string(ctx.sys.branch_count()) + " instantiated branches");
  return n;
}

int cmd_validate(const CommonOpts& o) {
  RunContext ctx = make_context(o);
  ValidationReport rep = ctx.sys.validate(64, default_uv_pairs(ctx.sys, ctx.cfg.uv_cap));
  write_file(ctx.out / "report_validate.txt",
             render_validation_report(header_for(ctx), ctx.sys, rep));
  std::cout << "validate: " << (rep.overall_pass ? "PASS" : "FAIL") << " ("
            << (ctx.out / "report_validate.txt").string() << ")\n";
  return rep.overall_pass ? kExitOk : kExitCheckFailed;
}

int cmd_relations(const CommonOpts& o) {
  RunContext ctx = make_context(o);
  OperatorTable table(ctx.sys, ctx.cells);
  auto fns = seeded_test_functions(ctx, table);
  RelationReport rep =
      verify_ck_relations(table, fns, default_uv_pairs(ctx.sys, ctx.cfg.uv_cap), ctx.cfg.tol);
  write_file(ctx.out / "report_relations.txt",
             render_relation_report(header_for(ctx), ctx.sys, rep));
  std::cout << "relations: " << (rep.pass ? "PASS" : "FAIL") << " ("
            << (ctx.out / "report_relations.txt").string() << ")\n";
  return rep.pass ? kExitOk : kExitCheckFailed;
}

int cmd_pf(const CommonOpts& o, const std::string& input_csv, std::size_t truncation,
           std::size_t mc_samples_override, bool with_mc) {
  RunContext ctx = make_context(o);
  OperatorTable table(ctx.sys, ctx.cells);

  std::ifstream in(input_csv);
  if (!in) throw std::runtime_error("cannot open input CSV '" + input_csv + "'");
  GridFunction phi = GridFunction::read_csv(in, ctx.sys.ambient());
  if (phi.cells() != ctx.cells)
    throw std::runtime_error("grid mismatch: input has " + std::to_string(phi.cells()) +
                             " cells, run resolves to " + std::to_string(ctx.cells));
  std::size_t n = resolve_truncation(ctx, truncation);

  TransferResult res = transfer_apply(table, phi, n);
  std::ostringstream csv;
  res.density.write_csv(csv);
  write_file(ctx.out / "pf_output.csv", csv.str());

  std::vector<std::pair<std::string, double>> residuals;
  for (const auto& set : dyadic_eighths(ctx.sys))
    residuals.emplace_back(set.str(), defining_residual(table, phi, set, n).residual);

  std::optional<double> mc_dist;
  if (with_mc && phi.integral() > 0.0) {
    std::size_t samples = mc_samples_override ? mc_samples_override : ctx.cfg.mc_samples;
    MonteCarloResult mc =
        monte_carlo_pushforward(ctx.sys, phi, samples, ctx.cfg.seed, ctx.cfg.mc_bins);
    std::ostringstream mc_csv;
    mc.estimate.write_csv(mc_csv);
    write_file(ctx.out / "mc_estimate.csv", mc_csv.str());
    if (ctx.cells % ctx.cfg.mc_bins == 0)
      mc_dist = (res.density.rebin(ctx.cfg.mc_bins) - mc.estimate).norm_l1();
  }

  write_file(ctx.out / "report_pf.txt",
             render_transfer_report(header_for(ctx), phi.integral(), res.density.integral(),
                                    res.form_agreement_max, residuals, mc_dist));
  std::cout << "pf: PASS (" << (ctx.out / "pf_output.csv").string() << ")\n";
  return kExitOk;
}

int cmd_matrix_rep(const CommonOpts& o, std::size_t block) {
  RunContext ctx = make_context(o);
  std::size_t n_block = block ? block : ctx.sys.branch_count();
  TransferMatrixResult res = transfer_matrix(ctx.sys, n_block);
  std::ostringstream rep;
  rep << "# transfer-operator matrix on indicator coordinates\n";
  std::istringstream hdr(header_for(ctx));
  std::string l;
  while (std::getline(hdr, l)) rep << "# config: " << l << "\n";
  rep << "status: " << res.status_str() << "\n";
  if (res.ok()) {
    rep << "column check residual: " << fmt_double(res.column_check_residual) << "\n";
    write_file(ctx.out / "matrix.csv", render_matrix_csv(res));
  }
  write_file(ctx.out / "report_matrix.txt", rep.str());
  std::cout << "matrix-rep: " << (res.ok() ? "PASS" : "FAIL " + res.status_str()) << "\n";
  return res.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_invariant(const CommonOpts& o, const std::string& rho0_csv) {
  RunContext ctx = make_context(o);
  OperatorTable table(ctx.sys, ctx.cells);
  GridFunction rho0(ctx.sys.ambient(), ctx.cells, 1.0 / ctx.sys.ambient().to_double());
  if (!rho0_csv.empty()) {
    std::ifstream in(rho0_csv);
    if (!in) throw std::runtime_error("cannot open density CSV '" + rho0_csv + "'");
    rho0 = GridFunction::read_csv(in, ctx.sys.ambient());
    if (rho0.cells() != ctx.cells)
      throw std::runtime_error("grid mismatch: density has " + std::to_string(rho0.cells()) +
                               " cells, run resolves to " + std::to_string(ctx.cells));
  }
  InvariantDensityResult res = invariant_density(table, rho0, ctx.cfg.max_iters, ctx.cfg.tol_l1);
  std::ostringstream csv;
  res.density.write_csv(csv);
  write_file(ctx.out / "invariant_density.csv", csv.str());
  std::vector<std::pair<std::string, double>> residuals;
  for (const auto& set : dyadic_eighths(ctx.sys))
    residuals.emplace_back(set.str(),
                           defining_residual(table, res.density, set, ctx.sys.branch_count()).residual);
  write_file(ctx.out / "report_invariant.txt",
             render_invariant_report(header_for(ctx), res, residuals));
  std::cout << "invariant: " << (res.converged ? "PASS" : "FAIL (not converged)") << " in "
            << res.iterations << " iterations\n";
  return res.converged ? kExitOk : kExitCheckFailed;
}

int cmd_truncation(const CommonOpts& o, const std::vector<std::size_t>& ns_flag,
                   const std::string& input_csv) {
  RunContext ctx = make_context(o);
  OperatorTable table(ctx.sys, ctx.cells);
  std::vector<std::size_t> ns = ns_flag.empty() ? ctx.cfg.ns : ns_flag;
  GridFunction phi = GridFunction::indicator(ctx.sys.declared_range_support(), ctx.cells);
  if (!input_csv.empty()) {
    std::ifstream in(input_csv);
    if (!in) throw std::runtime_error("cannot open input CSV '" + input_csv + "'");
    phi = GridFunction::read_csv(in, ctx.sys.ambient());
    if (phi.cells() != ctx.cells) throw std::runtime_error("grid mismatch in input CSV");
  }
  TruncationReport rep = truncation_study(table, phi, ns, dyadic_eighths(ctx.sys));
  for (std::size_t k = 0; k < rep.truncations.size(); ++k) {
    std::ostringstream csv;
    rep.partial_sums[k].write_csv(csv);
    write_file(ctx.out / ("partial_sum_N" + std::to_string(rep.truncations[k]) + ".csv"), csv.str());
  }
  write_file(ctx.out / "report_truncation.txt", render_truncation_report(header_for(ctx), rep));
  bool l1_ok = true;
  for (std::size_t k = 0; k + 1 < rep.l1_errors.size(); ++k)
    l1_ok = l1_ok && rep.l1_errors[k] > rep.l1_errors[k + 1];
  bool pass = l1_ok && rep.monotonicity_violations == 0;
  std::cout << "truncation: " << (pass ? "PASS" : "FAIL") << " ("
            << (ctx.out / "report_truncation.txt").string() << ")\n";
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"branching systems, Cuntz-Krieger generator operators, and transfer operators"};
  app.require_subcommand(1);

  CommonOpts o_validate, o_relations, o_pf, o_matrix, o_invariant, o_trunc;

  auto* validate = app.add_subcommand("validate", "check the branching-system conditions");
  add_common(validate, o_validate);

  auto* relations = app.add_subcommand("relations", "verify the generator relations numerically");
  add_common(relations, o_relations);

  auto* pf = app.add_subcommand("pf", "apply the transfer operator to a density CSV");
  add_common(pf, o_pf);
  std::string pf_input;
  std::size_t pf_truncation = 0, pf_mc_samples = 0;
  bool pf_with_mc = false;
  pf->add_option("-i,--input", pf_input, "input density CSV (midpoint,value)")->required();
  pf->add_option("-N,--truncation", pf_truncation, "number of branch terms (0 = all)");
  pf->add_flag("--with-mc", pf_with_mc, "also run the sampling oracle");
  pf->add_option("--mc-samples", pf_mc_samples, "override sample count for the oracle");

  auto* matrix = app.add_subcommand("matrix-rep", "matrix of the transfer operator on indicators");
  add_common(matrix, o_matrix);
  std::size_t matrix_block = 0;
  matrix->add_option("-b,--block", matrix_block, "block size (default: all branches)");

  auto* invariant = app.add_subcommand("invariant", "iterate to an invariant density");
  add_common(invariant, o_invariant);
  std::string rho0_csv;
  invariant->add_option("--rho0", rho0_csv, "starting density CSV (default uniform)");

  auto* trunc = app.add_subcommand("truncation", "truncation-convergence study");
  add_common(trunc, o_trunc);
  std::vector<std::size_t> ns_flag;
  std::string trunc_input;
  trunc->add_option("--ns", ns_flag, "truncation levels")->delimiter(',');
  trunc->add_option("-i,--input", trunc_input, "input density CSV (default: range-support indicator)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o_validate);
    if (relations->parsed()) return cmd_relations(o_relations);
    if (pf->parsed()) return cmd_pf(o_pf, pf_input, pf_truncation, pf_mc_samples, pf_with_mc);
    if (matrix->parsed()) return cmd_matrix_rep(o_matrix, matrix_block);
    if (invariant->parsed()) return cmd_invariant(o_invariant, rho0_csv);
    if (trunc->parsed()) return cmd_truncation(o_trunc, ns_flag, trunc_input);
  } catch (const SupportViolationError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
