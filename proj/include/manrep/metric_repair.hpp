// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "manrep/types.hpp"

namespace manrep {

/// Nonnegative symmetric increase matrix produced by repair.
struct RepairDelta {
  Matrix p;

  /// Strictly positive entries in the strict upper triangle.
  Index l0() const {
    Index count = 0;
    for (Index i = 0; i < p.rows(); ++i)
      for (Index j = i + 1; j < p.cols(); ++j)
        if (p(i, j) > 0.0) ++count;
    return count;
  }
};

struct Violation {
  Index i, k, j;
  double slack;  // d(i,j) - d(i,k) - d(k,j)
};

/// Triangle-inequality violations of a dissimilarity matrix, listed in
/// lexicographic (i, k, j) order with i < j.
struct ViolationReport {
  std::vector<Violation> triples;
  double max_slack = 0.0;
  std::size_t count = 0;

  bool empty() const { return triples.empty(); }
};

struct FixpointNotReached : std::runtime_error {
  explicit FixpointNotReached(ViolationReport r)
      : std::runtime_error(
            "metric repair: " + std::to_string(r.count) +
            " triangle violations remain, max slack " +
            std::to_string(r.max_slack)),
        report(std::move(r)) {}
  ViolationReport report;
};

/// Enumerates every triple (i, k, j) with i < j, k distinct from both,
/// and reports those with d(i,j) - d(i,k) - d(k,j) > tol.
inline ViolationReport check_metric(const Dissimilarity& d, double tol) {
  const Index n = d.n();
  ViolationReport report;
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      for (Index j = i + 1; j < n; ++j) {
        if (j == k) continue;
        const double slack = d.d(i, j) - d.d(i, k) - d.d(k, j);
        if (slack > tol) {
          report.triples.push_back({i, k, j, slack});
          if (slack > report.max_slack) report.max_slack = slack;
        }
      }
    }
  }
  report.count = report.triples.size();
  return report;
}

/// Fast emptiness probe equivalent to check_metric(d, tol).empty().
/// Slack is evaluated with the same operand order as check_metric so
/// the two agree bit for bit.
inline bool metric_violation_exists(const Dissimilarity& d, double tol) {
  const Index n = d.n();
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      const Index len = n - i - 1;
      if (len <= 0) continue;
      // j = k contributes exactly zero slack, so no exclusion needed.
      const double worst = ((d.d.col(i).tail(len).array() - d.d(i, k)) -
                            d.d.col(k).tail(len).array())
                               .maxCoeff();
      if (worst > tol) return true;
    }
  }
  return false;
}

/// One sweep of the fixed-order increase-only repair:
///   for k, for i:  d(i,k) = max(d(i,k), max_{j<i}(d(i,j) - d(j,k)))
/// Each update is mirrored immediately so the matrix stays symmetric.
/// Entries only ever grow; the returned delta is the total increase.
inline std::pair<Dissimilarity, RepairDelta> iomr_fixed_pass(
    const Dissimilarity& d) {
  const Index n = d.n();
  Matrix hat = d.d;
  // hat stays symmetric throughout, so column j doubles as row j and
  // the inner reduction runs over two contiguous columns.
  for (Index k = 0; k < n; ++k) {
    for (Index i = 1; i < n; ++i) {
      const auto row_i = hat.col(i).head(i).array();
      const auto row_k = hat.col(k).head(i).array();
      const double best = (row_i - row_k).maxCoeff();
      if (best > hat(i, k)) {
        hat(i, k) = best;
        hat(k, i) = best;
      }
    }
  }
  RepairDelta delta;
  delta.p = hat - d.d;
  Dissimilarity repaired;
  repaired.d = std::move(hat);
  return {std::move(repaired), std::move(delta)};
}

struct RepairResult {
  Dissimilarity repaired;
  RepairDelta delta;
  int iterations = 0;
};

/// Sentinel for repair_to_fixpoint: resolve tol as 1e-9 * max(d).
inline constexpr double kAutoRepairTol = -1.0;

struct RepairConfig {
  int max_iters = 20;
  double tol = kAutoRepairTol;
};

/// Sweeps until no entry moves by more than tol and the result passes
/// check_metric at that tolerance. The single sweep has no convergence
/// guarantee, so the output is always verified; if violations persist
/// after max_iters sweeps the report is thrown, never swallowed.
inline RepairResult repair_to_fixpoint(const Dissimilarity& d,
                                       int max_iters = 20,
                                       double tol = kAutoRepairTol) {
  if (max_iters < 1)
    throw std::invalid_argument("repair_to_fixpoint: max_iters must be >= 1");
  if (tol == kAutoRepairTol) tol = 1e-9 * d.max_entry();
  if (tol < 0.0)
    throw std::invalid_argument("repair_to_fixpoint: tol must be >= 0");

  const Index n = d.n();
  if (n <= 2) {
    RepairResult r;
    r.repaired = d;
    r.delta.p = Matrix::Zero(n, n);
    r.iterations = 1;
    return r;
  }

  Dissimilarity current = d;
  int iterations = 0;
  bool settled = false;
  while (iterations < max_iters) {
    auto [next, step] = iomr_fixed_pass(current);
    ++iterations;
    const double change = step.p.maxCoeff();
    current = std::move(next);
    if (change <= tol && !metric_violation_exists(current, tol)) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    ViolationReport report = check_metric(current, tol);
    if (!report.empty()) throw FixpointNotReached(std::move(report));
  }

  RepairResult result;
  result.delta.p = current.d - d.d;
  result.repaired = std::move(current);
  result.iterations = iterations;
  return result;
}

inline RepairResult repair_to_fixpoint(const Dissimilarity& d,
                                       const RepairConfig& cfg) {
  return repair_to_fixpoint(d, cfg.max_iters, cfg.tol);
}

}  // namespace manrep
