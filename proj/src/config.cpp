#include "ckpf/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ckpf {

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"system", {"builtin", "file", "n_max", "ambient_l"}},
    {"matrix", {"kind", "rows", "supports"}},
    {"grid", {"cells"}},
    {"relations", {"tol", "functions", "seed", "uv_cap"}},
    {"transfer", {"truncation"}},
    {"invariant", {"max_iters", "tol_l1"}},
    {"truncation", {"ns"}},
    {"monte-carlo", {"samples", "bins"}},
    {"output", {"dir"}},
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::size_t parse_size(const std::string& v, std::size_t line, std::size_t col) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(x);
  } catch (...) {
    throw ConfigError(line, col, "expected a nonnegative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& v, std::size_t line, std::size_t col) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError(line, col, "expected a real number, got '" + v + "'");
  }
}

nlohmann::json parse_array(const std::string& v, std::size_t line, std::size_t col) {
  try {
    auto j = nlohmann::json::parse(v);
    if (!j.is_array()) throw std::invalid_argument("");
    return j;
  } catch (...) {
    throw ConfigError(line, col, "expected a JSON array, got '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, line.size(), "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSchema.count(section)) throw ConfigError(line_no, 1, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, 1, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::size_t col = raw.find(key) + 1;
    if (section.empty()) throw ConfigError(line_no, col, "key outside any [section]");
    if (!kSchema.at(section).count(key))
      throw ConfigError(line_no, col, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ConfigError(line_no, col, "empty value for '" + key + "'");

    std::size_t vcol = raw.find('=') + 2;
    if (section == "system") {
      if (key == "builtin") {
        static const std::set<std::string> names = {"doubling", "o-infinity", "quadratic", "standard"};
        if (!names.count(value))
          throw ConfigError(line_no, vcol, "unknown builtin '" + value + "'");
        cfg.builtin = value;
      } else if (key == "file") {
        cfg.system_file = value;
      } else if (key == "n_max") {
        cfg.n_max = parse_size(value, line_no, vcol);
        if (cfg.n_max < 1) throw ConfigError(line_no, vcol, "n_max must be >= 1");
      } else if (key == "ambient_l") {
        try {
          cfg.ambient_l = Rational::parse(value);
        } catch (const std::exception& e) {
          throw ConfigError(line_no, vcol, e.what());
        }
      }
    } else if (section == "matrix") {
      if (key == "kind") {
        static const std::set<std::string> kinds = {"full-ones", "explicit", "row-supports", "staircase"};
        if (!kinds.count(value)) throw ConfigError(line_no, vcol, "unknown matrix kind '" + value + "'");
        cfg.matrix_kind = value;
      } else if (key == "rows") {
        auto j = parse_array(value, line_no, vcol);
        cfg.matrix_rows.clear();
        for (const auto& row : j) {
          if (!row.is_array()) throw ConfigError(line_no, vcol, "rows must be arrays of 0/1");
          std::vector<int> r;
          for (const auto& e : row) {
            if (!e.is_number_integer() || (e != 0 && e != 1))
              throw ConfigError(line_no, vcol, "matrix entries must be 0 or 1");
            r.push_back(e.get<int>());
          }
          cfg.matrix_rows.push_back(std::move(r));
        }
      } else if (key == "supports") {
        auto j = parse_array(value, line_no, vcol);
        cfg.matrix_supports.clear();
        for (const auto& row : j) {
          if (!row.is_array()) throw ConfigError(line_no, vcol, "supports must be arrays of indices");
          std::vector<std::size_t> r;
          for (const auto& e : row) {
            if (!e.is_number_integer() || e.get<long long>() < 1)
              throw ConfigError(line_no, vcol, "support indices are 1-based integers");
            r.push_back(e.get<std::size_t>());
          }
          cfg.matrix_supports.push_back(std::move(r));
        }
      }
    } else if (section == "grid") {
      cfg.cells = parse_size(value, line_no, vcol);
      if (cfg.cells == 1) throw ConfigError(line_no, vcol, "cells must be >= 2 (or 0 for automatic)");
    } else if (section == "relations") {
      if (key == "tol")
        cfg.tol = parse_real(value, line_no, vcol);
      else if (key == "functions")
        cfg.functions = parse_size(value, line_no, vcol);
      else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_size(value, line_no, vcol));
      else if (key == "uv_cap")
        cfg.uv_cap = parse_size(value, line_no, vcol);
    } else if (section == "transfer") {
      cfg.truncation = parse_size(value, line_no, vcol);
    } else if (section == "invariant") {
      if (key == "max_iters")
        cfg.max_iters = parse_size(value, line_no, vcol);
      else
        cfg.tol_l1 = parse_real(value, line_no, vcol);
    } else if (section == "truncation") {
      auto j = parse_array(value, line_no, vcol);
      cfg.ns.clear();
      for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 1)
          throw ConfigError(line_no, vcol, "truncation levels are positive integers");
        cfg.ns.push_back(e.get<std::size_t>());
      }
      if (cfg.ns.empty()) throw ConfigError(line_no, vcol, "need at least one truncation level");
    } else if (section == "monte-carlo") {
      if (key == "samples")
        cfg.mc_samples = parse_size(value, line_no, vcol);
      else
        cfg.mc_bins = parse_size(value, line_no, vcol);
    } else if (section == "output") {
      cfg.out_dir = value;
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::resolved_lines() const {
  std::ostringstream os;
  char buf[64];
  auto real = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "system.builtin = " << (system_file.empty() ? builtin : std::string("<file>")) << "\n";
  if (!system_file.empty()) os << "system.file = " << system_file << "\n";
  os << "system.n_max = " << n_max << "\n";
  if (ambient_l) os << "system.ambient_l = " << ambient_l->str() << "\n";
  if (!matrix_kind.empty()) os << "matrix.kind = " << matrix_kind << "\n";
  os << "grid.cells = " << cells << "\n";
  os << "relations.tol = " << real(tol) << "\n";
  os << "relations.functions = " << functions << "\n";
  os << "relations.seed = " << seed << "\n";
  os << "relations.uv_cap = " << uv_cap << "\n";
  os << "transfer.truncation = " << truncation << "\n";
  os << "invariant.max_iters = " << max_iters << "\n";
  os << "invariant.tol_l1 = " << real(tol_l1) << "\n";
  os << "truncation.ns =";
  for (std::size_t n : ns) os << " " << n;
  os << "\n";
  os << "monte-carlo.samples = " << mc_samples << "\n";
  os << "monte-carlo.bins = " << mc_bins << "\n";
  os << "output.dir = " << out_dir << "\n";
  return os.str();
}

}  // namespace ckpf
