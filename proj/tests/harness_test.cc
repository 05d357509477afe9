#include "cspack/harness.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <sstream>

namespace cspack {
namespace {

using ::testing::HasSubstr;

const CnfFormula kPhi1(1, {{1}, {-1}});
const CnfFormula kPhi2(3, {{1, 2, 3}, {-1, -2, -3}});

RoundtripOptions Opts(int r) {
  RoundtripOptions o;
  o.r = r;
  o.reduce.padding_width = 0;
  return o;
}

TEST(RoundtripTest, Phi1Agrees) {
  const auto rep = Roundtrip(kPhi1, Opts(2));
  EXPECT_EQ(rep.solve.verdict, Verdict::kNo);
  EXPECT_FALSE(rep.oracle.has_value());
  EXPECT_EQ(rep.agreement, Agreement::kAgree);
  EXPECT_EQ(rep.universe_size, 6u);
}

TEST(RoundtripTest, Phi2Agrees) {
  const auto rep = Roundtrip(kPhi2, Opts(2));
  EXPECT_EQ(rep.solve.verdict, Verdict::kYes);
  ASSERT_TRUE(rep.lifted.has_value());
  EXPECT_TRUE(Evaluate(kPhi2, *rep.lifted));
  EXPECT_EQ(rep.agreement, Agreement::kAgree);
  EXPECT_EQ(rep.lowered.size(), 2u);
}

TEST(RoundtripTest, PlantedRandomAgrees) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Assignment planted = RandomAssignment(8, seed);
    const CnfFormula f = GenRandom3Cnf(8, 24, seed, planted);
    const auto rep = Roundtrip(f, Opts(2));
    EXPECT_EQ(rep.agreement, Agreement::kAgree) << rep.detail;
    EXPECT_EQ(rep.solve.verdict, Verdict::kYes);
  }
}

TEST(RoundtripTest, BudgetIsInconclusive) {
  RoundtripOptions o = Opts(2);
  o.budget = 1;
  const auto rep = Roundtrip(GenRandom3Cnf(8, 24, 3), o);
  EXPECT_EQ(rep.agreement, Agreement::kInconclusive);
}

TEST(RoundtripTest, PaddedStillAgrees) {
  RoundtripOptions o = Opts(2);
  o.reduce.padding_width = 3;
  EXPECT_EQ(Roundtrip(kPhi1, o).agreement, Agreement::kAgree);
  EXPECT_EQ(Roundtrip(kPhi2, o).agreement, Agreement::kAgree);
}

TEST(SweepConfigTest, ParsesAndValidates) {
  const SweepConfig c = ParseSweepConfig(
      R"({"n_values": [6, 9, 12], "r": "log2", "instances": 2, "seed": 5,
          "density": 2.0, "padding": 3, "budget": 1000})");
  EXPECT_EQ(c.n_values, (std::vector<int>{6, 9, 12}));
  EXPECT_FALSE(c.fixed_r.has_value());
  EXPECT_EQ(c.padding, PaddingMode::kFixed);
  EXPECT_EQ(c.padding_width, 3);
  EXPECT_EQ(c.budget, 1000u);
  EXPECT_EQ(SweepR(c, 6), 3);
  EXPECT_EQ(SweepR(c, 9), 4);
  EXPECT_EQ(SweepR(c, 12), 4);

  const SweepConfig fixed = ParseSweepConfig(R"({"n_values": [6], "r": 2})");
  EXPECT_EQ(fixed.fixed_r, 2);
  EXPECT_EQ(fixed.padding, PaddingMode::kNone);

  EXPECT_THROW(ParseSweepConfig("{"), std::invalid_argument);
  EXPECT_THROW(ParseSweepConfig(R"({"r": 2})"), std::invalid_argument);
  EXPECT_THROW(ParseSweepConfig(R"({"n_values": [6], "r": "ln"})"),
               std::invalid_argument);
  EXPECT_THROW(ParseSweepConfig(R"({"n_values": [6], "instances": 0})"),
               std::invalid_argument);
  EXPECT_THROW(ParseSweepConfig(R"({"n_values": [6], "r": 1, "padding": "default"})"),
               std::invalid_argument);
  EXPECT_THROW(ParseSweepConfig(R"({"n_values": [2]})"), std::invalid_argument);
}

TEST(CeilLog2Test, Values) {
  EXPECT_EQ(CeilLog2(1), 0);
  EXPECT_EQ(CeilLog2(2), 1);
  EXPECT_EQ(CeilLog2(6), 3);
  EXPECT_EQ(CeilLog2(8), 3);
  EXPECT_EQ(CeilLog2(9), 4);
  EXPECT_EQ(CeilLog2(12), 4);
}

std::string StripTimings(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    cols.erase(cols.begin() + 6, cols.begin() + 8);
    for (const auto& c : cols) out += c + ',';
    out += '\n';
  }
  return out;
}

TEST(SweepTest, RowCountAndDeterminism) {
  SweepConfig c;
  c.n_values = {6};
  c.fixed_r = 2;
  c.instances = 5;
  c.seed = 11;
  c.density = 3.0;
  auto render = [&] {
    std::ostringstream out;
    WriteCsvHeader(out);
    for (const auto& row : RunSweep(c)) WriteCsvRow(row, out);
    return out.str();
  };
  const std::string a = render();
  const std::string b = render();
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 6);
  EXPECT_EQ(StripTimings(a), StripTimings(b));
  EXPECT_THAT(a, ::testing::StartsWith(
                     "n,m,r,universe_size,set_count,log2_set_count,"
                     "reduce_time,solve_time,solver_nodes,verdict,"
                     "oracle_verdict,agreement\n"));
  EXPECT_THAT(a, HasSubstr("agree"));
}

TEST(SweepTest, LogRule) {
  SweepConfig c;
  c.n_values = {6, 9, 12};
  c.instances = 1;
  c.density = 1.0;
  std::vector<int> rs;
  RunSweep(c, [&](const SweepRow& row) { rs.push_back(row.r); });
  EXPECT_EQ(rs, (std::vector<int>{3, 4, 4}));
}

TEST(SweepTest, FormulaIndependentOfR) {
  SweepConfig c;
  c.n_values = {12};
  c.seed = 3;
  c.density = 2.0;
  const CnfFormula f = SweepFormula(c, 12, 0);
  c.fixed_r = 4;
  EXPECT_EQ(SweepFormula(c, 12, 0), f);
  EXPECT_EQ(f.num_clauses(), 24u);
}

// Sparse regime (m = n): groups do not yet cover every variable.
TEST(SweepTest, LogSetCountDecreasesWithR) {
  SweepConfig c;
  c.n_values = {24};
  c.seed = 9;
  c.density = 1.0;
  c.oracle_cap = 0;
  c.budget = 100000;
  double prev = 1e300;
  for (int r : {2, 3, 4}) {
    c.fixed_r = r;
    const auto rows = RunSweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_LT(rows[0].log2_set_count, prev) << "r = " << r;
    prev = rows[0].log2_set_count;
  }
}

TEST(SweepTest, BudgetRowsAreInconclusive) {
  SweepConfig c;
  c.n_values = {9};
  c.fixed_r = 3;
  c.instances = 2;
  c.density = 4.0;
  c.budget = 1;
  for (const auto& row : RunSweep(c)) {
    EXPECT_EQ(row.verdict, Verdict::kBudgetExhausted);
    EXPECT_EQ(row.agreement, "inconclusive");
  }
}

TEST(SweepTest, OracleSkippedAboveCap) {
  SweepConfig c;
  c.n_values = {10};
  c.fixed_r = 2;
  c.oracle_cap = 8;
  c.density = 1.0;
  const auto rows = RunSweep(c);
  EXPECT_EQ(rows[0].oracle_verdict, "skip");
  EXPECT_EQ(rows[0].agreement, "unchecked");
}

}  // namespace
}  // namespace cspack
