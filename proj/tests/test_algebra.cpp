#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "ulmt/algebra.hpp"

using namespace ulmt;

namespace {

std::vector<UlChain> builtin_chains() {
  std::vector<UlChain> out;
  for (int n = 2; n <= 9; ++n) out.push_back(make_lukasiewicz_chain(n));
  for (int n = 2; n <= 9; ++n) out.push_back(make_godel_chain(n));
  for (int k = 1; k <= 4; ++k) out.push_back(make_truncated_group_chain(k));
  return out;
}

}  // namespace

TEST(Lukasiewicz, ProductExamples) {
  const UlChain l5 = make_lukasiewicz_chain(5);
  EXPECT_EQ(conj(l5, 3, 3), 2);
  EXPECT_EQ(conj(l5, 4, 2), 2);
  EXPECT_EQ(l5.one(), 4);
  EXPECT_EQ(l5.zero(), 0);
  EXPECT_EQ(l5.name(), "L5");

  const UlChain l2 = make_lukasiewicz_chain(2);
  EXPECT_EQ(conj(l2, 1, 1), 1);
  EXPECT_EQ(conj(l2, 1, 0), 0);
}

TEST(Lukasiewicz, RejectsTooSmall) {
  try {
    make_lukasiewicz_chain(1);
    FAIL() << "expected invalid-size";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_size);
  }
}

TEST(Godel, ProductAndResiduum) {
  const UlChain g3 = make_godel_chain(3);
  EXPECT_EQ(conj(g3, 2, 1), 1);
  EXPECT_EQ(residuum(g3, 2, 1), 1);
  EXPECT_EQ(residuum(g3, 1, 2), 2);
  EXPECT_THROW(make_godel_chain(0), error);
}

TEST(TruncatedGroup, ProductAndResiduum) {
  const UlChain z2 = make_truncated_group_chain(2);
  const auto at = [](int v) { return v + 2; };  // value -> index
  EXPECT_EQ(z2.size(), 5);
  EXPECT_EQ(z2.one(), at(0));
  EXPECT_EQ(z2.zero(), at(0));
  EXPECT_EQ(conj(z2, at(1), at(2)), at(2));
  EXPECT_EQ(residuum(z2, at(1), at(0)), at(-1));
  EXPECT_EQ(conj(z2, at(-1), at(1)), at(-1));
  EXPECT_EQ(conj(z2, at(-2), at(2)), at(-2));
  EXPECT_EQ(residuum(z2, at(-2), at(-2)), at(2));  // bot absorbs, so bot -> bot is top
  EXPECT_EQ(make_truncated_group_chain(2, 0).zero(), 0);
  EXPECT_THROW(make_truncated_group_chain(0), error);
}

TEST(TruncatedGroup, ClampedSumIsNotAChain) {
  for (int k = 1; k <= 3; ++k) {
    const UlChain raw("clamp", clamped_sum_table(k), k, k - 1);
    const auto report = verify_ul_axioms(raw);
    EXPECT_FALSE(report.all_passed());
    // k*c >= 0 for every c, so max{c : k*c <= -k} is empty.
    bool any = false;
    for (Degree c = 0; c < raw.size(); ++c) any = any || raw.conj_table()[2 * k][c] == 0;
    EXPECT_FALSE(any);
  }
}

TEST(Residuum, Examples) {
  const UlChain l5 = make_lukasiewicz_chain(5);
  EXPECT_EQ(residuum(l5, 3, 2), 3);
  EXPECT_EQ(residuum(l5, 0, 0), 4);
  for (const auto& c : builtin_chains())
    for (Degree b = 0; b < c.size(); ++b) EXPECT_EQ(residuum(c, c.one(), b), b) << c.name();
}

TEST(Residuum, OutOfRangeIsInvalidElement) {
  const UlChain l5 = make_lukasiewicz_chain(5);
  try {
    residuum(l5, 5, 0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_element);
  }
  EXPECT_THROW(residuum(l5, 0, -1), error);
}

TEST(Residuum, MatchesBruteForceOnBuiltins) {
  for (const auto& c : builtin_chains())
    for (Degree a = 0; a < c.size(); ++a)
      for (Degree b = 0; b < c.size(); ++b) ASSERT_EQ(c.residuum(a, b), oracle::residuum(c, a, b)) << c.name();
}

TEST(Axioms, BuiltinsPass) {
  for (const auto& c : builtin_chains()) {
    const auto report = verify_ul_axioms(c);
    EXPECT_TRUE(report.all_passed()) << c.name();
    EXPECT_EQ(report.checks.size(), 5u);
  }
}

TEST(Axioms, ResiduationAndPrelinearityExhaustive) {
  for (const auto& c : builtin_chains()) {
    const int n = c.size();
    for (Degree a = 0; a < n; ++a)
      for (Degree b = 0; b < n; ++b) {
        for (Degree x = 0; x < n; ++x) ASSERT_EQ(c.conj(a, b) <= x, b <= c.residuum(a, x));
        const Degree l = std::min(c.residuum(a, b), c.one());
        const Degree r = std::min(c.residuum(b, a), c.one());
        ASSERT_EQ(std::max(l, r), c.one());
      }
  }
}

TEST(Axioms, CorruptedTableReportsWitness) {
  auto table = make_lukasiewicz_chain(5).conj_table();
  table[1][2] = 4;
  const UlChain bad("bad", table, 4, 0);
  const auto report = verify_ul_axioms(bad);
  EXPECT_FALSE(report.all_passed());
  bool witnessed = false;
  for (const auto& c : report.checks)
    if (!c.passed && (c.axiom == "monotonicity" || c.axiom == "commutative-monoid")) {
      witnessed = true;
      EXPECT_FALSE(c.witness.empty());
    }
  EXPECT_TRUE(witnessed);
}

TEST(Axioms, NonResiduatedTable) {
  // A neutral element that is not the least element, yet the product never drops below it.
  const UlChain bad("stuck", {{1, 1}, {1, 1}}, 1, 0);
  EXPECT_FALSE(bad.residua_total());
  EXPECT_FALSE(verify_ul_axioms(bad).all_passed());
}

TEST(Chain, ShapeValidation) {
  EXPECT_THROW(UlChain("x", {{0}}, 0, 0), error);
  EXPECT_THROW(UlChain("x", {{0, 0}, {0}}, 1, 0), error);
  EXPECT_THROW(UlChain("x", {{0, 0}, {0, 5}}, 1, 0), error);
  EXPECT_THROW(UlChain("x", {{0, 0}, {0, 1}}, 2, 0), error);
}

TEST(Power, Examples) {
  const UlChain l5 = make_lukasiewicz_chain(5);
  EXPECT_EQ(power(l5, 3, 2), 2);
  EXPECT_EQ(power(l5, 3, 10), 0);
  for (Degree a = 0; a < 5; ++a) EXPECT_EQ(power(l5, a, 0), l5.one());
  const UlChain z2 = make_truncated_group_chain(2);
  EXPECT_EQ(power(z2, 4, 3), z2.one());  // min(a, 1) = 1
}

TEST(Power, NonIncreasingAndStationaryBySize) {
  for (const auto& c : builtin_chains())
    for (Degree a = 0; a < c.size(); ++a) {
      for (unsigned n = 0; n < 2u * static_cast<unsigned>(c.size()); ++n)
        ASSERT_LE(power(c, a, n + 1), power(c, a, n)) << c.name();
      const auto n = static_cast<unsigned>(c.size());
      ASSERT_EQ(power(c, a, n), power(c, a, n + 7)) << c.name();
    }
}

TEST(Power, AgreesWithRepeatedProduct) {
  for (const auto& c : builtin_chains())
    for (Degree a = 0; a < c.size(); ++a) {
      Degree acc = c.one();
      for (unsigned n = 0; n < 12; ++n) {
        ASSERT_EQ(power(c, a, n), acc);
        acc = c.conj_table()[acc][std::min(a, c.one())];
      }
    }
}
