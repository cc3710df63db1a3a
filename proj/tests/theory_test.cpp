// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#include "manrep/theory.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>

namespace manrep {
namespace {

TheoryParams pinned_tuple() {
  TheoryParams p;
  p.n = 100;
  p.mu1 = 1.0;
  p.mu2 = 0.0;
  p.p_present = 0.7;
  p.epsilon = 0.5;
  p.gamma = 0.1;
  return p;
}

TEST(ChiSquaredTailBound, HandValue) {
  EXPECT_NEAR(chi_squared_tail_bound(10, 0, 1), std::exp(-81.0 / 40.0),
              1e-15);
  // Independently computed reference for the same point.
  EXPECT_NEAR(chi_squared_tail_bound(10, 0, 1), 0.13199384318783020944,
              1e-12);
}

TEST(ChiSquaredTailBound, ApproachesOneNearTheEdge) {
  EXPECT_NEAR(chi_squared_tail_bound(10, 5, 15 - 1e-9), 1.0, 1e-6);
}

TEST(ChiSquaredTailBound, ScalesAsAPower) {
  const double base = chi_squared_tail_bound(5, 2, 3);
  for (int k : {2, 3, 7}) {
    EXPECT_NEAR(chi_squared_tail_bound(5.0 * k, 2.0 * k, 3.0 * k),
                std::pow(base, k), 1e-12 * std::pow(base, k));
  }
}

TEST(ChiSquaredTailBound, RejectsInfeasibleArguments) {
  EXPECT_THROW(chi_squared_tail_bound(0.5, 0, 0.1), std::invalid_argument);
  EXPECT_THROW(chi_squared_tail_bound(5, -1, 1), std::invalid_argument);
  EXPECT_THROW(chi_squared_tail_bound(5, 0, 5), std::invalid_argument);
  EXPECT_THROW(chi_squared_tail_bound(5, 0, 0), std::invalid_argument);
}

TEST(ChiSquaredTailBound, DominatesTheTrueLowerTail) {
  // Oracle: boost.math noncentral chi-squared CDF.
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const double dof = 1.0 + static_cast<double>(rng.below(50));
    const double lambda = rng.uniform(0.0, 50.0);
    const double c = rng.uniform(1e-6, dof + lambda - 1e-9);
    const double bound = chi_squared_tail_bound(dof, lambda, c);
    double cdf = 0.0;
    if (lambda < 1e-12) {
      cdf = boost::math::cdf(boost::math::chi_squared(dof), c);
    } else {
      cdf = boost::math::cdf(
          boost::math::non_central_chi_squared(dof, lambda), c);
    }
    ASSERT_LE(cdf, bound + 1e-10)
        << "dof=" << dof << " lambda=" << lambda << " c=" << c;
  }
}

TEST(HoeffdingTail, DirectSubstitution) {
  EXPECT_NEAR(hoeffding_tail(100, 0.1), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(hoeffding_tail(1, 1e-9), 1.0, 1e-12);
}

TEST(HoeffdingTail, DominatesExactBinomialLowerTail) {
  Rng rng(405);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + static_cast<int>(rng.below(1991));
    const double p = rng.uniform(0.1, 0.9);
    const double gamma = rng.uniform(0.01, p - 1e-6);
    const double cutoff = (p - gamma) * n;
    const double exact =
        boost::math::cdf(boost::math::binomial(n, p), std::floor(cutoff));
    ASSERT_LE(exact, hoeffding_tail(n, gamma) + 1e-12)
        << "n=" << n << " p=" << p << " gamma=" << gamma;
  }
}

TEST(HoeffdingTail, TwoSidedEmpiricalFrequency) {
  // Deviation frequency of binomial(1000, 0.5) stays below the
  // two-sided bound 2 exp(-2 gamma^2 n).
  Rng rng(406);
  const int n = 1000;
  const double p = 0.5, gamma = 0.05;
  const int trials = 100000;
  int deviations = 0;
  for (int t = 0; t < trials; ++t) {
    int sum = 0;
    for (int i = 0; i < n; ++i) sum += rng.bernoulli(p) ? 1 : 0;
    if (std::abs(sum - p * n) > gamma * n) ++deviations;
  }
  const double freq = static_cast<double>(deviations) / trials;
  EXPECT_LE(freq, 2.0 * hoeffding_tail(n, gamma) + 0.005);
}

TEST(TheoremBound, PinnedTupleRegression) {
  // Frozen via independent high-precision evaluation of the formula.
  EXPECT_NEAR(theorem_bound(pinned_tuple()), 0.32260344387896510618, 1e-12);
}

TEST(TheoremBound, DecreasesWithDimension) {
  TheoryParams p = pinned_tuple();
  double prev = 2.0;
  for (int n : {20, 50, 100, 200, 500, 1000}) {
    p.n = n;
    const double b = theorem_bound(p);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(TheoremBound, DecreasesWithSeparation) {
  TheoryParams p = pinned_tuple();
  p.gamma = 0.05;  // feasible across the whole sweep
  double prev = 2.0;
  for (double mu : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    p.mu1 = mu;
    const double b = theorem_bound(p);
    EXPECT_LE(b, prev + 1e-15);
    prev = b;
  }
}

TEST(TheoremBound, DecreasesWithPresenceProbability) {
  TheoryParams p = pinned_tuple();
  double prev = 2.0;
  for (double prob : {0.6, 0.7, 0.8, 0.9, 1.0}) {
    p.p_present = prob;
    const double b = theorem_bound(p);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(TheoremBound, InfeasibleParametersThrow) {
  TheoryParams p = pinned_tuple();
  p.epsilon = 2.0;  // above q(1+mu^2) = 0.98
  EXPECT_THROW(theorem_bound(p), std::invalid_argument);
  p = pinned_tuple();
  p.gamma = 0.5;  // above (q(1+mu^2)-eps)/(1+mu^2) = 0.24
  EXPECT_THROW(theorem_bound(p), std::invalid_argument);
  p = pinned_tuple();
  p.p_present = 0.0;
  EXPECT_THROW(theorem_bound(p), std::invalid_argument);
}

TEST(SampleMaskedSqDistance, FullPresenceZeroMeanIsChiSquared) {
  TheoryParams p;
  p.n = 50;
  p.mu1 = p.mu2 = 1.0;  // mu = 0
  p.p_present = 1.0;
  p.epsilon = 0.5;
  p.gamma = 0.25;
  Rng rng(7);
  const int draws = 10000;
  double total = 0.0;
  for (int t = 0; t < draws; ++t)
    total += sample_masked_sq_distance(p, rng);
  // chi^2_n mean is n; standard error sqrt(2n/draws).
  EXPECT_NEAR(total / draws, 50.0, 5.0 * std::sqrt(2.0 * 50.0 / draws));
}

TEST(SampleMaskedSqDistance, NoncentralMeanWithSeparation) {
  TheoryParams p;
  p.n = 50;
  p.mu1 = 2.0;
  p.mu2 = 0.0;  // mu = 2, mean n(1 + mu^2) = 250
  p.p_present = 1.0;
  p.epsilon = 0.5;
  p.gamma = 0.2;
  Rng rng(8);
  const int draws = 10000;
  double total = 0.0;
  for (int t = 0; t < draws; ++t)
    total += sample_masked_sq_distance(p, rng);
  EXPECT_NEAR(total / draws, 250.0, 2.5);
}

TEST(SampleMaskedSqDistance, ZeroOverlapGivesZero) {
  TheoryParams p = pinned_tuple();
  p.n = 3;
  p.p_present = 0.05;
  p.epsilon = 1e-4;
  p.gamma = 1e-5;
  // With tiny presence probability most draws observe nothing.
  int zeros = 0;
  for (std::uint64_t s = 0; s < 200; ++s)
    if (sample_masked_sq_distance(p, s) == 0.0) ++zeros;
  EXPECT_GT(zeros, 150);
}

TEST(MonteCarloBoundCheck, PinnedTupleHolds) {
  const auto result = monte_carlo_bound_check(pinned_tuple(), 100000, 2026);
  EXPECT_TRUE(result.ok);
  EXPECT_LE(result.empirical,
            result.bound + 3 * wilson_half_width(result.empirical, 100000));
  EXPECT_NEAR(result.bound, 0.32260344387896510618, 1e-12);
}

TEST(MonteCarloBoundCheck, TinyEpsilonStillBounded) {
  TheoryParams p = pinned_tuple();
  p.epsilon = 1e-6;
  p.gamma = 0.1;
  const auto result = monte_carlo_bound_check(p, 20000, 11);
  EXPECT_TRUE(result.ok);
}

TEST(MonteCarloBoundCheck, CoincidingClustersAreFeasible) {
  TheoryParams p;
  p.n = 100;
  p.mu1 = p.mu2 = 0.5;
  p.p_present = 0.7;
  p.epsilon = 0.25;  // feasibility reduces to eps < q = 0.49
  p.gamma = 0.1;
  const auto result = monte_carlo_bound_check(p, 20000, 12);
  EXPECT_TRUE(result.ok);
}

TEST(MonteCarloBoundCheck, GammaSearchTightensTheBound) {
  const auto plain = monte_carlo_bound_check(pinned_tuple(), 1000, 5);
  const auto tuned = monte_carlo_bound_check(pinned_tuple(), 1000, 5, true);
  EXPECT_LE(tuned.bound, plain.bound);
  EXPECT_TRUE(tuned.ok);
}

TEST(MonteCarloBoundCheck, ScheduleIndependence) {
  parallel::set_threads(1);
  const auto serial = monte_carlo_bound_check(pinned_tuple(), 5000, 77);
  parallel::set_threads(4);
  const auto threaded = monte_carlo_bound_check(pinned_tuple(), 5000, 77);
  parallel::set_threads(0);
  EXPECT_EQ(serial.empirical, threaded.empirical);
}

TEST(WilsonHalfWidth, ShrinksWithSamples) {
  EXPECT_GT(wilson_half_width(0.5, 100), wilson_half_width(0.5, 10000));
  EXPECT_GT(wilson_half_width(0.5, 10000), 0.0);
}

}  // namespace
}  // namespace manrep
