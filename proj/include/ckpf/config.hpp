#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckpf/rational.hpp"

namespace ckpf {

/// Config parse failure with position information.
struct ConfigError : std::runtime_error {
  ConfigError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error("config:" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line), column(col) {}
  std::size_t line, column;
};

/// Resolved run configuration. Parsed from a strict key-value file with
/// [section] headers; unknown sections or keys are rejected. Command-line
/// flags overwrite individual fields after parsing.
struct RunConfig {
  // [system]
  std::string builtin = "doubling";  // doubling | o-infinity | quadratic | standard
  std::string system_file;           // overrides builtin when nonempty
  std::size_t n_max = 8;
  std::optional<Rational> ambient_l;  // quadratic builtin

  // [matrix] (standard builtin)
  std::string matrix_kind;  // full-ones | explicit | row-supports | staircase
  std::vector<std::vector<int>> matrix_rows;
  std::vector<std::vector<std::size_t>> matrix_supports;

  // [grid]
  std::size_t cells = 0;  // 0 = smallest aligned grid >= 4096

  // [relations]
  double tol = 1e-9;
  std::size_t functions = 10;
  std::uint64_t seed = 20240817;
  std::size_t uv_cap = 6;

  // [transfer]
  std::size_t truncation = 0;  // 0 = all instantiated branches

  // [invariant]
  std::size_t max_iters = 200;
  double tol_l1 = 1e-7;

  // [truncation]
  std::vector<std::size_t> ns = {1, 2, 4, 8};

  // [monte-carlo]
  std::size_t mc_samples = 1000000;
  std::size_t mc_bins = 256;

  // [output]
  std::string out_dir = ".";

  /// Canonical resolved listing, one "key = value" per line, fixed order;
  /// embedded at the top of every report for provenance.
  std::string resolved_lines() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace ckpf
