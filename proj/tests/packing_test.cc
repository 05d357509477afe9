#include "cspack/packing.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>

#include "cspack/rng.h"
#include "oracle.h"

namespace cspack {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

SetPackingInstance ThreeSets(int r) {
  return SetPackingInstance(4, {{0, 1}, {2, 3}, {1, 2}}, r);
}

TEST(InstanceTest, ParseAndSerialize) {
  const std::string text = "p sp 4 2 2\ns 2 0 1\ns 2 2 3\n";
  const SetPackingInstance inst = ParseInstance(text);
  EXPECT_EQ(inst.universe_size(), 4u);
  EXPECT_EQ(inst.set_count(), 2u);
  EXPECT_EQ(inst.r(), 2);
  EXPECT_THAT(inst.set(1), ElementsAre(2, 3));
  EXPECT_EQ(SerializeInstance(inst), text);
}

TEST(InstanceTest, EmptySetSerializes) {
  const SetPackingInstance inst(3, {{}, {0, 2}}, 1);
  EXPECT_EQ(SerializeInstance(inst), "p sp 3 2 1\ns 0\ns 2 0 2\n");
  EXPECT_EQ(ParseInstance(SerializeInstance(inst)), inst);
}

void ExpectParseError(const std::string& text, const std::string& fragment) {
  try {
    ParseInstance(text);
    ADD_FAILURE() << "no error for: " << text;
  } catch (const FormatError& e) {
    EXPECT_THAT(e.what(), HasSubstr(fragment)) << text;
  }
}

TEST(InstanceTest, ParseErrors) {
  ExpectParseError("p sp 4 1 1\ns 2 1 0\n", "unsorted");
  ExpectParseError("p sp 4 1 1\ns 2 1 1\n", "unsorted or repeated");
  ExpectParseError("p sp 4 1 1\ns 1 4\n", "out of range");
  ExpectParseError("p sp 4 2 1\ns 1 0\ns 1 0\n", "are equal");
  ExpectParseError("p sp 4 2 1\ns 1 0\n", "declares 2 sets but 1");
  ExpectParseError("p sp 4 1 1\ns 2 0\n", "declares 2 elements");
  ExpectParseError("p sp 4 1\ns 1 0\n", "expected \"p sp");
  ExpectParseError("s 1 0\n", "expected \"p sp");
  ExpectParseError("p sp 4 1 1\nt 1 0\n", "expected \"s");
  ExpectParseError("p sp 4 1 0\ns 1 0\n", "r must be positive");
}

TEST(InstanceTest, SerializationRoundTripProperty) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t u = rng.Between(1, 40);
    std::set<ElementSet> family;
    const std::size_t want = rng.Between(0, 25);
    for (std::size_t k = 0; k < want; ++k) {
      ElementSet s;
      for (ElementId e = 0; e < u; ++e) {
        if (rng.Below(3) == 0) s.push_back(e);
      }
      family.insert(s);
    }
    const SetPackingInstance inst(
        u, std::vector<ElementSet>(family.begin(), family.end()),
        static_cast<int>(rng.Between(1, 4)));
    const std::string text = SerializeInstance(inst);
    EXPECT_EQ(ParseInstance(text), inst);
    EXPECT_EQ(SerializeInstance(ParseInstance(text)), text);
  }
}

TEST(SolveExactTest, Examples) {
  const auto yes = SolveExact(ThreeSets(2));
  EXPECT_EQ(yes.verdict, Verdict::kYes);
  EXPECT_THAT(yes.packing, ElementsAre(0, 1));

  const auto no = SolveExact(ThreeSets(3));
  EXPECT_EQ(no.verdict, Verdict::kNo);
  EXPECT_TRUE(no.packing.empty());
}

TEST(SolveExactTest, MoreSetsRequestedThanExist) {
  const auto res = SolveExact(ThreeSets(4));
  EXPECT_EQ(res.verdict, Verdict::kNo);
  EXPECT_EQ(res.nodes, 0u);
}

TEST(SolveExactTest, EmptySetPacksWithAnything) {
  const SetPackingInstance inst(2, {{0, 1}, {}, {1}}, 2);
  const auto res = SolveExact(inst);
  EXPECT_EQ(res.verdict, Verdict::kYes);
  EXPECT_THAT(res.packing, ElementsAre(0, 1));
}

SetPackingInstance RandomInstance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t u = rng.Between(1, 24);
  const std::size_t want = rng.Between(1, 20);
  const std::uint64_t density = rng.Between(2, 6);
  std::set<ElementSet> family;
  for (std::size_t k = 0; k < want; ++k) {
    ElementSet s;
    for (ElementId e = 0; e < u; ++e) {
      if (rng.Below(density) == 0) s.push_back(e);
    }
    family.insert(s);
  }
  return SetPackingInstance(
      u, std::vector<ElementSet>(family.begin(), family.end()),
      static_cast<int>(rng.Between(1, 5)));
}

// Completeness and soundness against exhaustive r-subset enumeration, on
// instances with at most 20 sets.
TEST(SolveExactTest, AgreesWithEnumeration) {
  int yes = 0;
  for (std::uint64_t seed = 0; seed < 1500; ++seed) {
    const SetPackingInstance inst = RandomInstance(seed);
    const auto res = SolveExact(inst);
    const auto expected = oracle::EnumeratePacking(inst);
    ASSERT_NE(res.verdict, Verdict::kBudgetExhausted);
    ASSERT_EQ(res.verdict == Verdict::kYes, expected.has_value())
        << "seed " << seed;
    if (expected) {
      ++yes;
      EXPECT_TRUE(VerifyPacking(inst, res.packing).ok);
      // Ordered DFS returns the lexicographically least packing.
      EXPECT_EQ(res.packing, *expected);
    }
  }
  EXPECT_GT(yes, 100);
  EXPECT_LT(yes, 1400);
}

TEST(SolveExactTest, DeterministicAndBudgetMonotone) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SetPackingInstance inst = RandomInstance(seed);
    const auto full = SolveExact(inst);
    const auto again = SolveExact(inst);
    EXPECT_EQ(full.verdict, again.verdict);
    EXPECT_EQ(full.packing, again.packing);
    EXPECT_EQ(full.nodes, again.nodes);
    if (full.nodes == 0) continue;
    // Exactly the nodes used suffice; one fewer never concludes "no".
    const auto exact = SolveExact(inst, full.nodes);
    EXPECT_EQ(exact.verdict, full.verdict);
    EXPECT_EQ(exact.packing, full.packing);
    const auto starved = SolveExact(inst, full.nodes - 1);
    EXPECT_EQ(starved.verdict, Verdict::kBudgetExhausted) << "seed " << seed;
    if (full.verdict == Verdict::kYes) {
      for (std::uint64_t b : {full.nodes + 1, full.nodes * 2}) {
        const auto more = SolveExact(inst, b);
        EXPECT_EQ(more.verdict, Verdict::kYes);
        EXPECT_EQ(more.packing, full.packing);
      }
    }
  }
}

TEST(SolveExactTest, BudgetExhaustionIsNotNo) {
  // 12 pairwise-intersecting sets, r = 2: every pair is examined.
  std::vector<ElementSet> sets;
  for (ElementId k = 1; k <= 12; ++k) sets.push_back({0, k});
  const SetPackingInstance inst(13, sets, 2);
  const auto full = SolveExact(inst);
  EXPECT_EQ(full.verdict, Verdict::kNo);
  const auto cut = SolveExact(inst, 5);
  EXPECT_EQ(cut.verdict, Verdict::kBudgetExhausted);
  EXPECT_EQ(cut.nodes, 5u);
}

TEST(VerifyPackingTest, Verdicts) {
  const SetPackingInstance inst = ThreeSets(2);
  const std::vector<std::size_t> good{0, 1};
  EXPECT_TRUE(VerifyPacking(inst, good).ok);

  const std::vector<std::size_t> dup{0, 0};
  auto v = VerifyPacking(inst, dup);
  EXPECT_FALSE(v.ok);
  EXPECT_THAT(v.reason, HasSubstr("duplicate index"));

  const std::vector<std::size_t> overlap{0, 2};
  v = VerifyPacking(inst, overlap);
  EXPECT_FALSE(v.ok);
  EXPECT_THAT(v.reason, HasSubstr("intersect at element 1"));

  const std::vector<std::size_t> range{0, 7};
  EXPECT_THAT(VerifyPacking(inst, range).reason, HasSubstr("out of range"));

  const std::vector<std::size_t> few{1};
  EXPECT_THAT(VerifyPacking(inst, few).reason, HasSubstr("parameter r is 2"));
}

TEST(AuditCompactnessTest, Examples) {
  // 22 / (8 * log2 14) and 6 / (8 * 1).
  std::vector<ElementSet> sets;
  for (ElementId k = 0; k < 14; ++k) sets.push_back({k});
  const auto rep = AuditCompactness(SetPackingInstance(22, sets, 2));
  EXPECT_NEAR(rep.rho, 22.0 / (8.0 * std::log2(14.0)), 1e-12);
  EXPECT_NEAR(rep.rho, 0.722286, 1e-6);
  EXPECT_DOUBLE_EQ(rep.log2_sets, std::log2(14.0));

  const auto rep2 =
      AuditCompactness(SetPackingInstance(6, {{0, 2, 4}, {2, 3, 5}}, 2));
  EXPECT_DOUBLE_EQ(rep2.rho, 0.75);
  EXPECT_FALSE(rep2.breakdown.has_value());

  EXPECT_THROW(AuditCompactness(SetPackingInstance(1, {{0}}, 2)),
               std::invalid_argument);
}

}  // namespace
}  // namespace cspack
