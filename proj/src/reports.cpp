#include "ckpf/reports.hpp"

#include <cstdio>
#include <sstream>

namespace ckpf {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit_header(std::ostream& os, const std::string& title, const std::string& config_header) {
  os << "# " << title << "\n";
  std::istringstream lines(config_header);
  std::string l;
  while (std::getline(lines, l)) os << "# config: " << l << "\n";
}

}  // namespace

std::string render_validation_report(const std::string& config_header,
                                     const BranchingSystem& sys, const ValidationReport& rep) {
  std::ostringstream os;
  emit_header(os, "branching-system validation: " + sys.name(), config_header);
  os << "# conditions: 1 piece tiling, 2 inverse round-trip, 3 range disjointness,\n";
  os << "#             4 matrix compatibility, 5 domain/range decomposition, 6 derivative positivity\n";
  for (const auto& e : rep.entries) {
    os << "condition " << e.condition << " " << e.subject << " "
       << (e.skipped ? "SKIP" : (e.pass ? "pass" : "FAIL"));
    if (e.metric != 0.0 || !e.pass) os << " metric=" << fmt_double(e.metric);
    if (!e.note.empty()) os << " (" << e.note << ")";
    os << "\n";
  }
  os << "overall: " << (rep.overall_pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render_relation_report(const std::string& config_header,
                                   const BranchingSystem& sys, const RelationReport& rep) {
  std::ostringstream os;
  emit_header(os, "generator-relation residuals: " + sys.name(), config_header);
  os << "# tolerance " << fmt_double(rep.tolerance) << "\n";
  for (const auto& e : rep.entries) {
    os << "relation " << e.relation << " " << e.subject << " ";
    if (e.skipped)
      os << "SKIP (" << e.note << ")";
    else
      os << (e.pass ? "pass" : "FAIL") << " residual=" << fmt_double(e.residual);
    os << "\n";
  }
  for (int r = 1; r <= 4; ++r)
    os << "max residual relation " << r << ": " << fmt_double(rep.max_residual[r]) << "\n";
  os << "overall: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render_matrix_csv(const TransferMatrixResult& res) {
  std::ostringstream os;
  for (const auto& row : res.entries) {
    for (std::size_t z = 0; z < row.size(); ++z) {
      if (z) os << ",";
      os << fmt_double(row[z].to_double());
    }
    os << "\n";
  }
  return os.str();
}

std::string render_invariant_report(const std::string& config_header,
                                    const InvariantDensityResult& res,
                                    const std::vector<std::pair<std::string, double>>& residuals) {
  std::ostringstream os;
  emit_header(os, "invariant density iteration", config_header);
  os << "iterations: " << res.iterations << "\n";
  os << "converged: " << (res.converged ? "yes" : "no") << "\n";
  for (std::size_t k = 0; k < res.step_l1.size(); ++k)
    os << "step " << (k + 1) << " l1_change=" << fmt_double(res.step_l1[k]) << "\n";
  for (const auto& [set, r] : residuals)
    os << "defining residual on " << set << ": " << fmt_double(r) << "\n";
  os << "overall: " << (res.converged ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render_truncation_report(const std::string& config_header,
                                     const TruncationReport& rep) {
  std::ostringstream os;
  emit_header(os, "truncation-convergence study", config_header);
  for (std::size_t k = 0; k < rep.truncations.size(); ++k)
    os << "N=" << rep.truncations[k] << " l1_error=" << fmt_double(rep.l1_errors[k])
       << " missing_mass=" << fmt_double(rep.missing_mass[k]) << "\n";
  os << "monotonicity violations: " << rep.monotonicity_violations << "\n";
  for (const auto& [set, r] : rep.defining_residuals)
    os << "defining residual on " << set << ": " << fmt_double(r) << "\n";
  bool l1_ok = true;
  for (std::size_t k = 0; k + 1 < rep.l1_errors.size(); ++k)
    l1_ok = l1_ok && rep.l1_errors[k] > rep.l1_errors[k + 1];
  os << "l1 errors strictly decreasing: " << (l1_ok ? "yes" : "no") << "\n";
  os << "overall: " << (l1_ok && rep.monotonicity_violations == 0 ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render_transfer_report(const std::string& config_header, double mass_in,
                                   double mass_out, double form_agreement,
                                   const std::vector<std::pair<std::string, double>>& residuals,
                                   const std::optional<double>& mc_l1_distance) {
  std::ostringstream os;
  emit_header(os, "transfer-operator application", config_header);
  os << "input mass: " << fmt_double(mass_in) << "\n";
  os << "output mass: " << fmt_double(mass_out) << "\n";
  os << "form agreement (max relative deviation): " << fmt_double(form_agreement) << "\n";
  for (const auto& [set, r] : residuals)
    os << "defining residual on " << set << ": " << fmt_double(r) << "\n";
  if (mc_l1_distance)
    os << "monte-carlo l1 distance: " << fmt_double(*mc_l1_distance) << "\n";
  os << "overall: PASS\n";
  return os.str();
}

}  // namespace ckpf
