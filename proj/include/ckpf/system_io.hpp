#pragma once

#include <string>

#include "ckpf/branching_system.hpp"
#include "ckpf/config.hpp"

namespace ckpf {

/// JSON serialization of a branching system. Interval unions are arrays of
/// [num_lo, den_lo, num_hi, den_hi] quadruples; rationals are [num, den]
/// pairs. Pieces carry their kind tag and exact parameters.
std::string system_to_json(const BranchingSystem& sys);
BranchingSystem system_from_json(const std::string& text);
BranchingSystem load_system_file(const std::string& path);

/// Builds the system a config describes: one of the builtin families or a
/// system description file.
BranchingSystem build_system(const RunConfig& cfg);

/// Builds the matrix described by the [matrix] section.
ZeroOneMatrix build_matrix(const RunConfig& cfg);

}  // namespace ckpf
