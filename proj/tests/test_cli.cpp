#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ckpf/grid_function.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = CKPF_WORK_DIR;
const fs::path kAssets = CKPF_ASSETS_DIR;
const std::string kCli = CKPF_CLI_PATH;

int run(const std::string& args) {
  fs::create_directories(kWork);
  std::string cmd = "\"" + kCli + "\" " + args + " >" + (kWork / "stdout.txt").string() + " 2>" +
                    (kWork / "stderr.txt").string();
  int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  return WEXITSTATUS(ret);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& content) {
  fs::create_directories(kWork);
  fs::path p = kWork / name;
  std::ofstream f(p);
  f << content;
  return p;
}

fs::path counterexample_config() {
  return write("counterexample.cfg", "[system]\nfile = " +
                                         (kAssets / "counterexample_system.json").string() + "\n");
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate: standard builtin passes, exit 0") {
  fs::path cfg = write("standard.cfg",
                       "[system]\nbuiltin = standard\nn_max = 2\n"
                       "[matrix]\nkind = explicit\nrows = [[1,1],[1,0]]\n");
  fs::path out = kWork / "out_validate_ok";
  CHECK(run("validate -c " + cfg.string() + " -o " + out.string()) == 0);
  std::string report = slurp(out / "report_validate.txt");
  CHECK(report.find("overall: PASS") != std::string::npos);
  CHECK(report.find("# config:") != std::string::npos);
}

TEST_CASE("validate: counterexample exits 2 and names condition 4, pair (1,2)") {
  fs::path out = kWork / "out_validate_bad";
  CHECK(run("validate -c " + counterexample_config().string() + " -o " + out.string()) == 2);
  std::string report = slurp(out / "report_validate.txt");
  CHECK(report.find("condition 4 pair (1,2) FAIL metric=1") != std::string::npos);
  CHECK(report.find("overall: FAIL") != std::string::npos);
}

TEST_CASE("relations: counterexample exits 2, doubling exits 0") {
  fs::path out = kWork / "out_rel_bad";
  CHECK(run("relations -c " + counterexample_config().string() + " -o " + out.string() +
            " --cells 1024") == 2);
  fs::path cfg = write("doubling.cfg", "[system]\nbuiltin = doubling\n[relations]\nfunctions = 3\n");
  fs::path out2 = kWork / "out_rel_ok";
  CHECK(run("relations -c " + cfg.string() + " -o " + out2.string() + " --cells 1024") == 0);
  CHECK(slurp(out2 / "report_relations.txt").find("overall: PASS") != std::string::npos);
}

TEST_CASE("matrix-rep: doubling emits the exact 2x2 block") {
  fs::path cfg = write("doubling2.cfg", "[system]\nbuiltin = doubling\n");
  fs::path out = kWork / "out_matrix";
  CHECK(run("matrix-rep -c " + cfg.string() + " -o " + out.string()) == 0);
  CHECK(slurp(out / "matrix.csv") == "0.5,0.5\n0.5,0.5\n");
}

TEST_CASE("matrix-rep: parabolic branches exit 2 with the nonconstant-derivative status") {
  fs::path cfg = write("quadratic.cfg",
                       "[system]\nbuiltin = quadratic\nn_max = 6\nambient_l = 3/1\n");
  fs::path out = kWork / "out_matrix_quad";
  CHECK(run("matrix-rep -c " + cfg.string() + " -o " + out.string()) == 2);
  CHECK(slurp(out / "report_matrix.txt").find("nonconstant-derivative") != std::string::npos);
}

TEST_CASE("pf: zero density input produces a zero output CSV, exit 0") {
  fs::path cfg = write("pf.cfg", "[system]\nbuiltin = doubling\n[grid]\ncells = 256\n");
  ckpf::GridFunction zero(ckpf::Rational(1), 256);
  std::ostringstream csv;
  zero.write_csv(csv);
  fs::path input = write("zero.csv", csv.str());
  fs::path out = kWork / "out_pf";
  CHECK(run("pf -c " + cfg.string() + " -i " + input.string() + " -o " + out.string()) == 0);
  std::istringstream in(slurp(out / "pf_output.csv"));
  ckpf::GridFunction back = ckpf::GridFunction::read_csv(in, ckpf::Rational(1));
  CHECK(back.norm_sup() == 0.0);
}

TEST_CASE("pf: sampling oracle artifacts on request") {
  fs::path cfg = write("pf_mc.cfg",
                       "[system]\nbuiltin = doubling\n[grid]\ncells = 256\n"
                       "[monte-carlo]\nsamples = 20000\nbins = 256\n");
  ckpf::GridFunction one(ckpf::Rational(1), 256, 1.0);
  std::ostringstream csv;
  one.write_csv(csv);
  fs::path input = write("one.csv", csv.str());
  fs::path out = kWork / "out_pf_mc";
  CHECK(run("pf -c " + cfg.string() + " -i " + input.string() + " -o " + out.string() +
            " --with-mc") == 0);
  CHECK(fs::exists(out / "mc_estimate.csv"));
  CHECK(slurp(out / "report_pf.txt").find("monte-carlo l1 distance:") != std::string::npos);
}

TEST_CASE("pf: grid mismatch is a usage error") {
  fs::path cfg = write("pf2.cfg", "[system]\nbuiltin = doubling\n[grid]\ncells = 512\n");
  ckpf::GridFunction zero(ckpf::Rational(1), 256);
  std::ostringstream csv;
  zero.write_csv(csv);
  fs::path input = write("zero256.csv", csv.str());
  CHECK(run("pf -c " + cfg.string() + " -i " + input.string() + " -o " +
            (kWork / "out_pf2").string()) == 1);
}

TEST_CASE("invariant and truncation commands succeed on their natural systems") {
  fs::path cfg = write("doubling3.cfg", "[system]\nbuiltin = doubling\n[grid]\ncells = 512\n");
  CHECK(run("invariant -c " + cfg.string() + " -o " + (kWork / "out_inv").string()) == 0);
  fs::path ocfg = write("oinf.cfg",
                        "[system]\nbuiltin = o-infinity\nn_max = 8\n[grid]\ncells = 1024\n"
                        "[truncation]\nns = [1,2,4,8]\n");
  CHECK(run("truncation -c " + ocfg.string() + " -o " + (kWork / "out_trunc").string()) == 0);
  std::string rep = slurp(kWork / "out_trunc" / "report_truncation.txt");
  CHECK(rep.find("l1 errors strictly decreasing: yes") != std::string::npos);
  CHECK(rep.find("monotonicity violations: 0") != std::string::npos);
}

TEST_CASE("usage and config errors exit 1") {
  CHECK(run("validate -c /does/not/exist.cfg") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("validate") == 1);  // missing --config
  fs::path bad = write("bad.cfg", "[system]\nbuiltin = doubling\nwhat = 3\n");
  CHECK(run("validate -c " + bad.string()) == 1);
  fs::path bad2 = write("bad2.cfg", "[grid]\ncells = 1\n");
  CHECK(run("validate -c " + bad2.string()) == 1);
  fs::path bad3 = write("bad3.cfg", "[system]\nbuiltin = pony\n");
  CHECK(run("validate -c " + bad3.string()) == 1);
}

TEST_CASE("byte-identical outputs for identical config and seed") {
  fs::path out = kWork / "det";
  fs::path cfg = write("det.cfg",
                       "[system]\nbuiltin = doubling\n[grid]\ncells = 512\n"
                       "[relations]\nfunctions = 4\nseed = 99\n"
                       "[output]\ndir = " + out.string() + "\n");
  CHECK(run("relations -c " + cfg.string()) == 0);
  std::string first = slurp(out / "report_relations.txt");
  CHECK(run("relations -c " + cfg.string()) == 0);
  std::string second = slurp(out / "report_relations.txt");
  CHECK(first == second);
  CHECK(!first.empty());
}

TEST_SUITE_END();
