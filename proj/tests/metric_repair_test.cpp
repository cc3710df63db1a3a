// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#include "manrep/metric_repair.hpp"

#include <gtest/gtest.h>

#include "manrep/rng.hpp"
#include "test_util.hpp"

namespace manrep {
namespace {

Dissimilarity three_point_violation() {
  Matrix m(3, 3);
  m << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  return Dissimilarity::from_upper(m);
}

TEST(CheckMetric, ReportsTheViolatedTriple) {
  const auto report = check_metric(three_point_violation(), 0.0);
  ASSERT_EQ(report.count, 1u);
  EXPECT_EQ(report.triples[0].i, 0);
  EXPECT_EQ(report.triples[0].k, 1);
  EXPECT_EQ(report.triples[0].j, 2);
  EXPECT_DOUBLE_EQ(report.triples[0].slack, 3.0);
  EXPECT_DOUBLE_EQ(report.max_slack, 3.0);
}

TEST(CheckMetric, ToleranceAboveSlackSilences) {
  EXPECT_TRUE(check_metric(three_point_violation(), 10.0).empty());
}

TEST(CheckMetric, MetricInputIsClean) {
  Rng rng(1);
  const auto d = testutil::random_euclidean_metric(rng, 10, 3);
  EXPECT_TRUE(check_metric(d, 0.0).empty());
  EXPECT_FALSE(metric_violation_exists(d, 0.0));
}

TEST(CheckMetric, LexicographicOrder) {
  Matrix m(4, 4);
  m << 0, 9, 1, 1,  //
      9, 0, 1, 1,   //
      1, 1, 0, 9,   //
      1, 1, 9, 0;
  const auto report = check_metric(Dissimilarity::from_upper(m), 0.0);
  ASSERT_GE(report.count, 2u);
  for (std::size_t t = 1; t < report.triples.size(); ++t) {
    const auto& a = report.triples[t - 1];
    const auto& b = report.triples[t];
    EXPECT_TRUE(std::tuple(a.i, a.k, a.j) < std::tuple(b.i, b.k, b.j));
  }
}

TEST(CheckMetric, FastProbeAgreesWithFullScan) {
  Rng rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix m = Matrix::Zero(8, 8);
    for (Index i = 0; i < 8; ++i)
      for (Index j = i + 1; j < 8; ++j) m(i, j) = rng.uniform(0.0, 2.0);
    const auto d = Dissimilarity::from_upper(m);
    for (double tol : {0.0, 0.1, 0.5}) {
      ASSERT_EQ(!check_metric(d, tol).empty(),
                metric_violation_exists(d, tol));
    }
  }
}

TEST(IomrFixedPass, MetricStaysUntouched) {
  Rng rng(2);
  const auto d = testutil::random_euclidean_metric(rng, 4, 2);
  const auto [repaired, delta] = iomr_fixed_pass(d);
  EXPECT_EQ(delta.p.maxCoeff(), 0.0);
  EXPECT_TRUE(repaired.d == d.d);
}

TEST(IomrFixedPass, ThreePointSweepByHand) {
  // Sweep of the fixed loop order on [[0,1,5],[1,0,1],[5,1,0]] raises
  // exactly entry (1,2) from 1 to 4.
  const auto [repaired, delta] = iomr_fixed_pass(three_point_violation());
  Matrix expected(3, 3);
  expected << 0, 1, 5, 1, 0, 4, 5, 4, 0;
  EXPECT_TRUE(repaired.d == expected)
      << "got:\n" << repaired.d << "\nexpected:\n" << expected;
  EXPECT_DOUBLE_EQ(delta.p(1, 2), 3.0);
  EXPECT_LE(testutil::worst_triangle_slack(repaired.d), 0.0);
}

TEST(IomrFixedPass, TinyMatricesPassThrough) {
  Matrix one = Matrix::Zero(1, 1);
  const auto [r1, p1] = iomr_fixed_pass(Dissimilarity::from_upper(one));
  EXPECT_EQ(r1.d(0, 0), 0.0);

  Matrix two(2, 2);
  two << 0, 3, 3, 0;
  const auto [r2, p2] = iomr_fixed_pass(Dissimilarity::from_upper(two));
  EXPECT_TRUE(r2.d == two);
  EXPECT_EQ(p2.p.maxCoeff(), 0.0);
}

TEST(RepairToFixpoint, MetricConvergesImmediately) {
  Rng rng(3);
  const auto d = testutil::random_euclidean_metric(rng, 12, 3);
  const auto result = repair_to_fixpoint(d, 10, 0.0);
  EXPECT_EQ(result.iterations, 1);
  EXPECT_EQ(result.delta.p.maxCoeff(), 0.0);
  EXPECT_TRUE(result.repaired.d == d.d);
}

TEST(RepairToFixpoint, ThreePointReachesAValidMetric) {
  const auto result = repair_to_fixpoint(three_point_violation(), 10);
  EXPECT_LE(result.iterations, 10);
  EXPECT_LE(testutil::worst_triangle_slack(result.repaired.d), 0.0);
  EXPECT_GE(result.delta.p.minCoeff(), 0.0);
}

TEST(RepairToFixpoint, RandomCorruptedMetrics) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = testutil::random_euclidean_metric(rng, 50, 4, 10.0);
    // Sparse positive decreases: shrink a few entries toward zero.
    for (int hits = 0; hits < 30; ++hits) {
      const Index i = static_cast<Index>(rng.below(50));
      const Index j = static_cast<Index>(rng.below(50));
      if (i == j) continue;
      const double shrunk = d.d(i, j) * rng.uniform(0.0, 0.4);
      d.d(i, j) = d.d(j, i) = shrunk;
    }
    const double tol = 1e-9 * d.max_entry();
    const auto result = repair_to_fixpoint(d, 20);
    ASSERT_LE(testutil::worst_triangle_slack(result.repaired.d), tol);
    ASSERT_GE(result.delta.p.minCoeff(), 0.0);
    // Entries the repair never raised are bit-identical to the input.
    for (Index i = 0; i < 50; ++i)
      for (Index j = 0; j < 50; ++j)
        if (result.delta.p(i, j) == 0.0)
          ASSERT_EQ(result.repaired.d(i, j), d.d(i, j));
  }
}

TEST(RepairToFixpoint, DeltaL0CountsUpperTriangle) {
  const auto result = repair_to_fixpoint(three_point_violation(), 10);
  EXPECT_EQ(result.delta.l0(), 1);
}

TEST(RepairToFixpoint, RejectsBadArguments) {
  const auto d = three_point_violation();
  EXPECT_THROW(repair_to_fixpoint(d, 0), std::invalid_argument);
  EXPECT_THROW(repair_to_fixpoint(d, 5, -2.0), std::invalid_argument);
}

TEST(RepairToFixpoint, IdempotentOnItsOwnOutput) {
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto d = testutil::random_euclidean_metric(rng, 30, 3);
    for (int hits = 0; hits < 12; ++hits) {
      const Index i = static_cast<Index>(rng.below(30));
      const Index j = static_cast<Index>(rng.below(30));
      if (i != j) d.d(i, j) = d.d(j, i) = d.d(i, j) * 0.2;
    }
    const auto first = repair_to_fixpoint(d, 20);
    const auto second = repair_to_fixpoint(first.repaired, 20);
    EXPECT_EQ(second.delta.p.maxCoeff(), 0.0);
    EXPECT_TRUE(second.repaired.d == first.repaired.d);
  }
}

}  // namespace
}  // namespace manrep
