// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "manrep/parallel.hpp"
#include "manrep/types.hpp"

namespace manrep {

namespace detail {

// Column-major m x n copies of mask (as 0/1 doubles) and of values with
// absent entries zeroed, so each point is a contiguous column and NaN
// placeholders cannot leak into the arithmetic.
struct MaskedColumns {
  Matrix weights;  // m x n, 1 where present
  Matrix values;   // m x n, 0 where absent

  explicit MaskedColumns(const MaskedDataset& data)
      : weights(data.m(), data.n()), values(data.m(), data.n()) {
    for (Index i = 0; i < data.n(); ++i) {
      for (Index k = 0; k < data.m(); ++k) {
        const bool present = data.mask()(i, k);
        weights(k, i) = present ? 1.0 : 0.0;
        values(k, i) = present ? data.values()(i, k) : 0.0;
      }
    }
  }
};

}  // namespace detail

/// Pairwise Euclidean distances over the jointly observed coordinates
/// of each pair. A pair with no shared observed coordinate gets
/// distance 0 (the empty sum).
inline Dissimilarity masked_euclidean(const MaskedDataset& data) {
  const Index n = data.n();
  const Index m = data.m();
  const detail::MaskedColumns cols(data);
  Matrix d = Matrix::Zero(n, n);
  parallel::for_each_index(0, n, [&](std::int64_t i) {
    const double* wi = cols.weights.col(i).data();
    const double* vi = cols.values.col(i).data();
    for (Index j = i + 1; j < n; ++j) {
      const double* wj = cols.weights.col(j).data();
      const double* vj = cols.values.col(j).data();
      // Strict left-to-right summation: the masked sum then never
      // exceeds a plain Euclidean sum evaluated in the same order.
      double sq = 0.0;
      for (Index k = 0; k < m; ++k) {
        const double diff = vi[k] - vj[k];
        sq += wi[k] * wj[k] * (diff * diff);
      }
      d(i, j) = std::sqrt(sq);
    }
  });
  // Mirror the upper triangle so symmetry is exact.
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  Dissimilarity out;
  out.d = std::move(d);
  return out;
}

/// Entry (i, j) = number of coordinates observed in both points.
inline IntMatrix overlap_counts(const MaskedDataset& data) {
  const Index n = data.n();
  const detail::MaskedColumns cols(data);
  IntMatrix counts(n, n);
  for (Index i = 0; i < n; ++i) {
    counts(i, i) = static_cast<int>(cols.weights.col(i).sum());
    for (Index j = i + 1; j < n; ++j) {
      const double c = cols.weights.col(i).dot(cols.weights.col(j));
      counts(i, j) = counts(j, i) = static_cast<int>(c);
    }
  }
  return counts;
}

/// Number of unordered pairs that share no observed coordinate.
inline Index zero_overlap_pairs(const MaskedDataset& data) {
  const IntMatrix counts = overlap_counts(data);
  Index pairs = 0;
  for (Index i = 0; i < counts.rows(); ++i)
    for (Index j = i + 1; j < counts.cols(); ++j)
      if (counts(i, j) == 0) ++pairs;
  return pairs;
}

}  // namespace manrep
