#pragma once

#include <string>

#include "ckpf/branching_system.hpp"
#include "ckpf/ck_operators.hpp"
#include "ckpf/transfer.hpp"

namespace ckpf {

/// Round-trip decimal formatting used by every report and CSV writer, so
/// identical runs produce identical bytes.
std::string fmt_double(double v);

std::string render_validation_report(const std::string& config_header,
                                     const BranchingSystem& sys, const ValidationReport& rep);

std::string render_relation_report(const std::string& config_header,
                                   const BranchingSystem& sys, const RelationReport& rep);

std::string render_matrix_csv(const TransferMatrixResult& res);

std::string render_invariant_report(const std::string& config_header,
                                    const InvariantDensityResult& res,
                                    const std::vector<std::pair<std::string, double>>& residuals);

std::string render_truncation_report(const std::string& config_header,
                                     const TruncationReport& rep);

std::string render_transfer_report(const std::string& config_header, double mass_in,
                                   double mass_out, double form_agreement,
                                   const std::vector<std::pair<std::string, double>>& residuals,
                                   const std::optional<double>& mc_l1_distance);

}  // namespace ckpf
