#include "doctest.h"

#include "ckpf/config.hpp"
#include "ckpf/system_io.hpp"
#include "fixtures.hpp"

using namespace ckpf;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults") {
  RunConfig cfg = parse_config("");
  CHECK(cfg.builtin == "doubling");
  CHECK(cfg.n_max == 8);
  CHECK(cfg.cells == 0);
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.seed == 20240817);
}

TEST_CASE("full round of keys") {
  std::string text = R"(# experiment
[system]
builtin = standard
n_max = 2

[matrix]
kind = explicit
rows = [[1,1],[1,0]]

[grid]
cells = 6144

[relations]
tol = 1e-8
functions = 4
seed = 7
uv_cap = 3

[transfer]
truncation = 2

[invariant]
max_iters = 50
tol_l1 = 1e-6

[truncation]
ns = [1,2]

[monte-carlo]
samples = 1000
bins = 64

[output]
dir = results
)";
  RunConfig cfg = parse_config(text);
  CHECK(cfg.builtin == "standard");
  CHECK(cfg.n_max == 2);
  CHECK(cfg.matrix_kind == "explicit");
  REQUIRE(cfg.matrix_rows.size() == 2);
  CHECK(cfg.matrix_rows[1] == std::vector<int>{1, 0});
  CHECK(cfg.cells == 6144);
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.functions == 4);
  CHECK(cfg.seed == 7);
  CHECK(cfg.uv_cap == 3);
  CHECK(cfg.truncation == 2);
  CHECK(cfg.max_iters == 50);
  CHECK(cfg.tol_l1 == 1e-6);
  CHECK(cfg.ns == std::vector<std::size_t>{1, 2});
  CHECK(cfg.mc_samples == 1000);
  CHECK(cfg.mc_bins == 64);
  CHECK(cfg.out_dir == "results");

  BranchingSystem sys = build_system(cfg);
  CHECK(sys.name() == "standard");
  CHECK(sys.branch_count() == 2);
}

TEST_CASE("strict parsing carries line numbers") {
  try {
    parse_config("[system]\nbananas = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("key = 1\n"), ConfigError);              // outside a section
  CHECK_THROWS_AS(parse_config("[system]\nbuiltin = weird\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\ncells = 1\n"), ConfigError);    // grids need >= 2 cells
  CHECK_THROWS_AS(parse_config("[system]\nn_max = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\ncells = pony\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[matrix]\nrows = [[1,2]]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nambient_l = 0.5\n"), ConfigError);  // rationals are p/q
}

TEST_CASE("ambient_l parses as an exact rational") {
  RunConfig cfg = parse_config("[system]\nbuiltin = quadratic\nn_max = 6\nambient_l = 3/1\n");
  REQUIRE(cfg.ambient_l.has_value());
  CHECK(*cfg.ambient_l == Rational(3));
  BranchingSystem sys = build_system(cfg);
  CHECK(sys.name() == "quadratic");
  CHECK(sys.branch_count() == 3);
}

TEST_CASE("resolved header is deterministic") {
  RunConfig a = parse_config("[relations]\nseed = 5\n");
  RunConfig b = parse_config("[relations]\nseed = 5\n");
  CHECK(a.resolved_lines() == b.resolved_lines());
  CHECK(a.resolved_lines().find("relations.seed = 5") != std::string::npos);
}

TEST_CASE("system json round trip") {
  for (const auto& sys : {doubling_system(), o_infinity_system(4),
                          quadratic_system(4, Rational(2)),
                          testing::identity_mismatch_system()}) {
    std::string text = system_to_json(sys);
    BranchingSystem back = system_from_json(text);
    CHECK(back.ambient() == sys.ambient());
    CHECK(back.branch_count() == sys.branch_count());
    CHECK(back.name() == sys.name());
    CHECK(back.declared_range_support().ae_equal(sys.declared_range_support()));
    for (std::size_t i = 1; i <= sys.branch_count(); ++i) {
      CHECK(back.branch(i).domain().ae_equal(sys.branch(i).domain()));
      CHECK(back.branch(i).range().ae_equal(sys.branch(i).range()));
      CHECK(back.branch(i).pieces().size() == sys.branch(i).pieces().size());
    }
    // behavior survives the round trip
    ValidationReport orig = sys.validate(16, default_uv_pairs(sys));
    ValidationReport again = back.validate(16, default_uv_pairs(back));
    CHECK(orig.overall_pass == again.overall_pass);
  }
}

TEST_CASE("system json rejects malformed input") {
  CHECK_THROWS(system_from_json("{}"));
  CHECK_THROWS(system_from_json("{\"ambient\": [1,1], \"matrix\": {\"kind\": \"alien\", \"n_max\": 1}, \"branches\": []}"));
}

TEST_SUITE_END();
