#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "max2csp/cli.hpp"
#include "max2csp/instance_io.hpp"
#include "max2csp/text.hpp"

namespace max2csp {
namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"gen", "--family", "sat"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve"}).code, kExitUsage);
  EXPECT_EQ(cli({"exact", "/nonexistent/file.txt"}).code, kExitUsage);
  EXPECT_EQ(cli({"round", "a", "b", "--trials", "0"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, GenIsDeterministic) {
  const CliRun a = cli({"gen", "--family", "random", "--n", "6", "--R", "3", "--m", "9", "--seed", "4"});
  const CliRun b = cli({"gen", "--family", "random", "--n", "6", "--R", "3", "--m", "9", "--seed", "4"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  const Instance inst = parse_instance(a.out);
  EXPECT_EQ(inst.num_variables(), 6);
  EXPECT_EQ(inst.num_constraints(), 9u);
  EXPECT_NE(cli({"gen", "--family", "random", "--n", "6", "--R", "3", "--m", "9", "--seed", "5"}).out, a.out);
}

TEST(Cli, PlantedOutRequiresPlantedGame) {
  testing::TempDir dir("cli-plant");
  EXPECT_EQ(cli({"gen", "--planted-out", dir.file("z")}).code, kExitUsage);
  const CliRun r = cli({"gen", "--family", "ug", "--planted", "--n", "5", "--R", "3", "--m", "6",
                     "--out", dir.file("i.txt"), "--planted-out", dir.file("z")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(slurp(dir.file("z")).rfind("ASSIGNMENT ", 0), 0u);
  const CliRun opt = cli({"exact", dir.file("i.txt")});
  EXPECT_EQ(opt.out.rfind("OPT 6\n", 0), 0u);
}

TEST(Cli, ExampleEndToEnd) {
  testing::TempDir dir("cli-e2e");
  const std::string inst = dir.file("ex.txt"), sol = dir.file("ex.sol");
  ASSERT_EQ(cli({"gen", "--family", "example", "--out", inst}).code, kExitOk);

  const CliRun ex = cli({"exact", inst});
  EXPECT_EQ(ex.code, kExitOk);
  EXPECT_EQ(ex.out.rfind("OPT 4\nASSIGNMENT ", 0), 0u);
  EXPECT_EQ(cli({"exact", inst, "--budget", "26"}).code, kExitUsage);

  const CliRun sv = cli({"solve", inst, "--out", sol});
  EXPECT_EQ(sv.code, kExitOk);
  EXPECT_EQ(sv.out.rfind("objective 4.17706", 0), 0u) << sv.out;
  EXPECT_NE(sv.out.find("converged 1\n"), std::string::npos);

  const CliRun r1 = cli({"round", inst, sol, "--trials", "50", "--seed", "3", "--dump-state", dir.file("st")});
  const CliRun r2 = cli({"round", inst, sol, "--trials", "50", "--seed", "3"});
  EXPECT_EQ(r1.code, kExitOk);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_NE(r1.out.find("TRIALS 50\n"), std::string::npos);
  EXPECT_EQ(slurp(dir.file("st")).rfind("ROUND 1 3 3 ", 0), 0u);

  const CliRun nv = cli({"round", inst, sol, "--method", "naive", "--trials", "20", "--out", dir.file("z")});
  EXPECT_EQ(nv.code, kExitOk);
  EXPECT_EQ(slurp(dir.file("z")).rfind("ASSIGNMENT ", 0), 0u);
  EXPECT_EQ(cli({"round", inst, sol, "--method", "naive", "--dump-state", dir.file("q")}).code, kExitUsage);
}

TEST(Cli, RoundRejectsMismatchedSolution) {
  testing::TempDir dir("cli-shape");
  const std::string a = dir.file("a.txt"), b = dir.file("b.txt"), sol = dir.file("a.sol");
  cli({"gen", "--n", "4", "--R", "3", "--m", "5", "--out", a});
  cli({"gen", "--n", "5", "--R", "3", "--m", "5", "--out", b});
  ASSERT_EQ(cli({"solve", a, "--out", sol}).code, kExitOk);
  EXPECT_EQ(cli({"round", b, sol}).code, kExitUsage);
}

TEST(Cli, ExperimentByteIdentical) {
  testing::TempDir dir("cli-exp");
  const std::string cfg = dir.file("c.exp");
  write_file_atomic(cfg, "EXP 1\ntrials 50\ninstance example\ninstance 2lin 5 3 8 2\n");
  const CliRun a = cli({"experiment", cfg, "--seed", "2"});
  const CliRun b = cli({"experiment", cfg, "--seed", "2", "--threads", "2"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(cli({"experiment", cfg, "--seed", "2", "--out", dir.file("o.csv")}).code, kExitOk);
  EXPECT_EQ(slurp(dir.file("o.csv")), a.out);
  EXPECT_NE(cli({"experiment", cfg, "--seed", "3"}).out, a.out);
  write_file_atomic(cfg, "EXP 1\nbogus\n");
  EXPECT_EQ(cli({"experiment", cfg}).code, kExitUsage);
}

TEST(Cli, VerifyGaussianReduced) {
  const CliRun r = cli({"verify-gaussian", "--trials", "20000", "--pairs", "5", "--profiles", "50"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 11);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace max2csp
