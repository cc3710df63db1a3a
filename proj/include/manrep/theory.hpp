// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "manrep/parallel.hpp"
#include "manrep/rng.hpp"

namespace manrep {

/// Two isotropic Gaussian clusters in R^n with covariance 0.5 I and
/// per-coordinate presence probability p. q = p^2 is the probability
/// that a coordinate is observed in both points of a pair.
struct TheoryParams {
  int n = 100;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double p_present = 1.0;
  double epsilon = 0.1;
  double gamma = 0.01;

  double mu() const { return mu1 - mu2; }
  double q() const { return p_present * p_present; }

  double epsilon_limit() const { return q() * (1.0 + mu() * mu()); }
  double gamma_limit() const {
    return (epsilon_limit() - epsilon) / (1.0 + mu() * mu());
  }

  /// Throws naming the violated constraint.
  void validate() const {
    if (n < 1) throw std::invalid_argument("theory: n must be >= 1");
    if (!(p_present > 0.0 && p_present <= 1.0))
      throw std::invalid_argument("theory: p must be in (0, 1]");
    if (!(epsilon > 0.0 && epsilon < epsilon_limit()))
      throw std::invalid_argument(
          "theory: infeasible epsilon, need 0 < epsilon < q(1+mu^2) = " +
          std::to_string(epsilon_limit()));
    if (!(gamma > 0.0 && gamma < gamma_limit()))
      throw std::invalid_argument(
          "theory: infeasible gamma, need 0 < gamma < "
          "(q(1+mu^2)-epsilon)/(1+mu^2) = " +
          std::to_string(gamma_limit()));
  }
};

/// Lower-tail bound for a noncentral chi-squared variable with `dof`
/// degrees of freedom and noncentrality `lambda`:
///   Pr[X <= c] <= exp(-(dof+lambda-c)^2 / (4(dof+2 lambda))).
inline double chi_squared_tail_bound(double dof, double lambda, double c) {
  if (dof < 1.0)
    throw std::invalid_argument("chi_squared_tail_bound: dof must be >= 1");
  if (lambda < 0.0)
    throw std::invalid_argument("chi_squared_tail_bound: lambda must be >= 0");
  if (!(c > 0.0 && c < dof + lambda))
    throw std::invalid_argument(
        "chi_squared_tail_bound: need 0 < c < dof + lambda");
  const double diff = dof + lambda - c;
  return std::exp(-diff * diff / (4.0 * (dof + 2.0 * lambda)));
}

/// One-sided Hoeffding deviation bound exp(-2 gamma^2 n) for the mean
/// of n Bernoulli variables.
inline double hoeffding_tail(int n_trials, double gamma) {
  if (n_trials < 1)
    throw std::invalid_argument("hoeffding_tail: n must be >= 1");
  if (!(gamma > 0.0))
    throw std::invalid_argument("hoeffding_tail: gamma must be > 0");
  return std::exp(-2.0 * gamma * gamma * static_cast<double>(n_trials));
}

/// Bound on Pr[squared masked distance < epsilon * n] for a pair drawn
/// from the two-cluster model:
///   exp(-2 gamma^2 n)
///     + (exp(-((q-gamma)(1+mu^2)-eps)^2 / (4(q-gamma)(1+2 mu^2))))^n
inline double theorem_bound(const TheoryParams& params) {
  params.validate();
  const double n = static_cast<double>(params.n);
  const double mu2 = params.mu() * params.mu();
  const double qg = params.q() - params.gamma;
  const double first = std::exp(-2.0 * params.gamma * params.gamma * n);
  const double diff = qg * (1.0 + mu2) - params.epsilon;
  const double base = std::exp(-diff * diff / (4.0 * qg * (1.0 + 2.0 * mu2)));
  return first + std::pow(base, n);
}

/// One draw of the squared masked distance between a point of each
/// cluster. Per coordinate the draw order is fixed: x, y, then the two
/// presence indicators.
inline double sample_masked_sq_distance(const TheoryParams& params, Rng& rng) {
  const double sd = std::sqrt(0.5);
  double total = 0.0;
  for (int k = 0; k < params.n; ++k) {
    const double x = rng.normal(params.mu1, sd);
    const double y = rng.normal(params.mu2, sd);
    const bool x_present = rng.bernoulli(params.p_present);
    const bool y_present = rng.bernoulli(params.p_present);
    if (x_present && y_present) {
      const double z = x - y;
      total += z * z;
    }
  }
  return total;
}

inline double sample_masked_sq_distance(const TheoryParams& params,
                                        std::uint64_t seed) {
  Rng rng(seed);
  return sample_masked_sq_distance(params, rng);
}

/// Half-width of the Wilson score interval at `z` standard normal
/// units.
inline double wilson_half_width(double p_hat, long n, double z = 1.0) {
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) *
         std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
}

struct BoundCheck {
  double empirical = 0.0;
  double bound = 0.0;
  double gamma_used = 0.0;
  long trials = 0;
  bool ok = false;
};

/// Estimates Pr[squared masked distance < epsilon n] by Monte Carlo
/// and compares against the bound. Trials use per-trial derived seeds,
/// so the result is independent of the parallel schedule. With
/// optimize_gamma the bound is minimized over a grid of feasible
/// gamma values.
inline BoundCheck monte_carlo_bound_check(const TheoryParams& params,
                                          long trials, std::uint64_t seed,
                                          bool optimize_gamma = false) {
  params.validate();
  if (trials < 1)
    throw std::invalid_argument("monte_carlo_bound_check: trials must be >= 1");

  TheoryParams used = params;
  double bound = theorem_bound(params);
  if (optimize_gamma) {
    constexpr int kGrid = 256;
    const double limit = params.gamma_limit();
    for (int g = 0; g < kGrid; ++g) {
      TheoryParams trial = params;
      trial.gamma = limit * (g + 0.5) / kGrid;
      const double b = theorem_bound(trial);
      if (b < bound) {
        bound = b;
        used = trial;
      }
    }
  }

  const double threshold = params.epsilon * static_cast<double>(params.n);
  std::atomic<long> hits{0};
  parallel::for_each_index(0, trials, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (sample_masked_sq_distance(params, rng) < threshold)
      hits.fetch_add(1, std::memory_order_relaxed);
  });

  BoundCheck out;
  out.trials = trials;
  out.empirical =
      static_cast<double>(hits.load()) / static_cast<double>(trials);
  out.bound = bound;
  out.gamma_used = used.gamma;
  out.ok = out.empirical <= bound + 3.0 * wilson_half_width(out.empirical, trials);
  return out;
}

}  // namespace manrep
