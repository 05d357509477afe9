// Runs the cspack binary end to end.

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cspack/cnf.h"
#include "cspack/packing.h"
#include "cspack/reduction.h"

namespace cspack {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::Not;
using ::testing::StartsWith;

struct CliResult {
  int status;
  std::string out;
};

CliResult Cli(const std::string& args) {
  const std::string cmd = std::string(CSPACK_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string Data(const std::string& name) {
  return std::string(CSPACK_TEST_DATA) + "/" + name;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cspack_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ReducePhi1Unpadded) {
  const CliResult run = Cli("reduce " + Data("phi1.cnf") + " --r 2 --no-pad -o " + Tmp("p1.sp"));
  ASSERT_EQ(run.status, 0) << run.out;
  EXPECT_THAT(run.out, HasSubstr("1*2^2 + 2 + 0 = 6"));
  EXPECT_THAT(Slurp(Tmp("p1.sp")), StartsWith("p sp 6 2 2\n"));
  const WitnessMap w = ParseWitness(Slurp(Tmp("p1.sp.wit")));
  EXPECT_EQ(w.core_count(), 2u);
  EXPECT_EQ(w.padding_count(), 0u);
}

TEST_F(CliTest, ReduceDefaultOutputNextToInput) {
  fs::copy_file(Data("phi2.cnf"), Tmp("phi2.cnf"));
  const CliResult run = Cli("reduce " + Tmp("phi2.cnf") + " --r 2 --pad 2");
  ASSERT_EQ(run.status, 0) << run.out;
  const SetPackingInstance inst = ParseInstance(Slurp(Tmp("phi2.cnf.sp")));
  EXPECT_EQ(inst.universe_size(), 24u);
  EXPECT_EQ(inst.set_count(), 18u);
  EXPECT_TRUE(fs::exists(Tmp("phi2.cnf.sp.wit")));
}

TEST_F(CliTest, PaddingWithSingleGroupIsUsageError) {
  const CliResult run = Cli("reduce " + Data("phi1.cnf") + " --r 1 --pad 2 -o " + Tmp("x.sp"));
  EXPECT_EQ(run.status, 1);
  EXPECT_THAT(run.out, HasSubstr("r >= 2"));
  EXPECT_FALSE(fs::exists(Tmp("x.sp")));
}

TEST_F(CliTest, MissingFileNamesPath) {
  const CliResult run = Cli("reduce " + Tmp("absent.cnf"));
  EXPECT_EQ(run.status, 1);
  EXPECT_THAT(run.out, HasSubstr(Tmp("absent.cnf")));
}

TEST_F(CliTest, MalformedCnfReportsLine) {
  const CliResult run = Cli("reduce " + Data("bad_range.cnf") + " -o " + Tmp("x.sp"));
  EXPECT_EQ(run.status, 1);
  EXPECT_THAT(run.out, HasSubstr("variable index 3 out of range"));
}

TEST_F(CliTest, RoundtripFixturesAgree) {
  CliResult run = Cli("roundtrip " + Data("phi1.cnf") + " --r 2");
  EXPECT_EQ(run.status, 0) << run.out;
  EXPECT_THAT(run.out, HasSubstr("AGREE"));

  run = Cli("roundtrip " + Data("phi2.cnf") + " --r 2 --no-pad");
  EXPECT_EQ(run.status, 0) << run.out;
  EXPECT_THAT(run.out, HasSubstr("lifted: x1=0 x2=0 x3=1"));
  EXPECT_THAT(run.out, HasSubstr("AGREE"));
}

TEST_F(CliTest, RoundtripPlantedRandom) {
  const CliResult gen = Cli("gen-cnf --n 8 --density 3 --seed 12 --planted -o " + Tmp("f.cnf"));
  ASSERT_EQ(gen.status, 0) << gen.out;
  const CnfFormula f = ParseDimacs(Slurp(Tmp("f.cnf")));
  EXPECT_EQ(f.num_vars(), 8);
  EXPECT_EQ(f.num_clauses(), 24u);
  const CliResult run = Cli("roundtrip " + Tmp("f.cnf") + " --r 2");
  EXPECT_EQ(run.status, 0) << run.out;
  EXPECT_THAT(run.out, HasSubstr("AGREE"));
}

TEST_F(CliTest, RoundtripBudgetIsInconclusive) {
  const CliResult run = Cli("roundtrip " + Data("phi2.cnf") + " --r 2 --budget 1");
  EXPECT_EQ(run.status, 3) << run.out;
  EXPECT_THAT(run.out, HasSubstr("INCONCLUSIVE"));
}

TEST_F(CliTest, SolveVerifyAudit) {
  ASSERT_EQ(Cli("reduce " + Data("phi2.cnf") + " --r 2 --no-pad -o " + Tmp("p2.sp")).status, 0);

  CliResult run = Cli("solve " + Tmp("p2.sp"));
  EXPECT_EQ(run.status, 0);
  EXPECT_THAT(run.out, StartsWith("YES 0 8\n"));

  run = Cli("verify " + Tmp("p2.sp") + " 0 8 --witness " + Tmp("p2.sp.wit") +
            " --cnf " + Data("phi2.cnf"));
  EXPECT_EQ(run.status, 0) << run.out;
  EXPECT_THAT(run.out, HasSubstr("lifted x1=0 x2=0 x3=1"));

  run = Cli("verify " + Tmp("p2.sp") + " 0 1");
  EXPECT_EQ(run.status, 2);
  EXPECT_THAT(run.out, HasSubstr("intersect at element"));

  run = Cli("audit " + Tmp("p2.sp") + " --witness " + Tmp("p2.sp.wit"));
  EXPECT_EQ(run.status, 0);
  EXPECT_THAT(run.out, HasSubstr("rho 0.722286"));
  EXPECT_THAT(run.out, HasSubstr("iss 10"));

  ASSERT_EQ(Cli("reduce " + Data("phi1.cnf") + " --r 2 --no-pad -o " + Tmp("p1.sp")).status, 0);
  run = Cli("solve " + Tmp("p1.sp"));
  EXPECT_EQ(run.status, 0);
  EXPECT_THAT(run.out, StartsWith("NO"));
}

TEST_F(CliTest, BenchWritesOneRowPerInstance) {
  const CliResult run = Cli("bench " + Data("bench_small.json") + " -o " + Tmp("b.csv"));
  ASSERT_EQ(run.status, 0) << run.out;
  const std::string csv = Slurp(Tmp("b.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_THAT(csv, StartsWith("n,m,r,"));
  EXPECT_THAT(csv, Not(HasSubstr("disagree")));
}

TEST_F(CliTest, BenchRejectsBadConfig) {
  std::ofstream(Tmp("bad.json")) << R"({"n_values": [6], "r": 1, "padding": "default"})";
  EXPECT_EQ(Cli("bench " + Tmp("bad.json")).status, 1);
}

TEST_F(CliTest, GenCnfIsDeterministic) {
  const CliResult a = Cli("gen-cnf --n 10 --m 15 --seed 5");
  const CliResult b = Cli("gen-cnf --n 10 --m 15 --seed 5");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(ParseDimacs(a.out).num_clauses(), 15u);
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(Cli("frobnicate").status, 1);
  EXPECT_EQ(Cli("solve").status, 1);
}

}  // namespace
}  // namespace cspack
