// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "manrep/types.hpp"

namespace manrep {

/// Similarity transform aligning a candidate point set onto a
/// reference, with the residual expressed as a Frobenius ratio.
struct AlignmentResult {
  Matrix rotation;      // d x d orthogonal (reflections allowed)
  double scale = 1.0;
  Vector translation;   // length d
  Matrix aligned;       // n x d
  double relative_error = 0.0;
};

/// Closed-form orthogonal Procrustes with scaling: minimizes
/// || reference - scale * candidate * Q - 1 t^T ||_F.
/// Rows are points. The rotation comes from the SVD of the centered
/// cross-product; scale is the trace of its singular values over the
/// squared norm of the centered candidate.
inline AlignmentResult procrustes_align(const Matrix& reference,
                                        const Matrix& candidate) {
  if (reference.rows() != candidate.rows() ||
      reference.cols() != candidate.cols())
    throw ShapeError("procrustes_align: shape mismatch");

  const Eigen::RowVectorXd ref_mean = reference.colwise().mean();
  const Eigen::RowVectorXd cand_mean = candidate.colwise().mean();
  const Matrix ref_c = reference.rowwise() - ref_mean;
  const Matrix cand_c = candidate.rowwise() - cand_mean;

  const double ref_norm2 = ref_c.squaredNorm();
  if (ref_norm2 == 0.0)
    throw DegenerateReference("procrustes_align: reference has no spread");

  AlignmentResult out;
  const Index dim = reference.cols();
  const double cand_norm2 = cand_c.squaredNorm();
  if (cand_norm2 == 0.0) {
    out.rotation = Matrix::Identity(dim, dim);
    out.scale = 1.0;
  } else {
    Eigen::JacobiSVD<Matrix> svd(cand_c.transpose() * ref_c,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.rotation = svd.matrixU() * svd.matrixV().transpose();
    out.scale = svd.singularValues().sum() / cand_norm2;
  }
  out.aligned =
      ((out.scale * (cand_c * out.rotation)).rowwise() + ref_mean).eval();
  out.translation =
      (ref_mean - out.scale * cand_mean * out.rotation).transpose();
  out.relative_error =
      (reference - out.aligned).norm() / reference.norm();
  return out;
}

/// || reference - aligned ||_F / || reference ||_F
inline double relative_error(const Matrix& reference, const Matrix& aligned) {
  if (reference.rows() != aligned.rows() ||
      reference.cols() != aligned.cols())
    throw ShapeError("relative_error: shape mismatch");
  const double norm = reference.norm();
  if (norm == 0.0)
    throw DegenerateReference("relative_error: zero-norm reference");
  return (reference - aligned).norm() / norm;
}

namespace detail {

// Indices of the k nearest rows to row i (self excluded), ties by
// lower index.
inline std::vector<Index> knn_of_point(const Matrix& coords, Index i, int k) {
  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(coords.rows()) - 1);
  for (Index j = 0; j < coords.rows(); ++j)
    if (j != i)
      order.emplace_back((coords.row(i) - coords.row(j)).norm(), j);
  std::sort(order.begin(), order.end());
  std::vector<Index> out(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) out[static_cast<std::size_t>(t)] = order[static_cast<std::size_t>(t)].second;
  return out;
}

}  // namespace detail

/// Mean over points of |kNN in reference space ∩ kNN in candidate
/// space| / k. 1.0 iff every neighborhood is preserved exactly.
inline double neighborhood_preservation(const Matrix& reference,
                                        const Matrix& candidate, int k) {
  const Index n = reference.rows();
  if (candidate.rows() != n)
    throw ShapeError("neighborhood_preservation: point counts differ");
  if (k < 1 || k >= n)
    throw std::invalid_argument(
        "neighborhood_preservation: k must satisfy 1 <= k < n");
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    auto a = detail::knn_of_point(reference, i, k);
    auto b = detail::knn_of_point(candidate, i, k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<Index> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    total += static_cast<double>(common.size()) / k;
  }
  return total / static_cast<double>(n);
}

/// Majority vote among the k nearest training points; vote ties go to
/// the smallest label value.
inline std::vector<int> knn_classify(const Matrix& train_coords,
                                     const std::vector<int>& train_labels,
                                     const Matrix& test_coords, int k) {
  const Index n_train = train_coords.rows();
  if (n_train == 0)
    throw std::invalid_argument("knn_classify: empty training set");
  if (static_cast<Index>(train_labels.size()) != n_train)
    throw ShapeError("knn_classify: label count != training rows");
  if (train_coords.cols() != test_coords.cols())
    throw ShapeError("knn_classify: dimension mismatch");
  if (k < 1) throw std::invalid_argument("knn_classify: k must be >= 1");
  const int kk = static_cast<int>(std::min<Index>(k, n_train));

  std::vector<int> predictions(static_cast<std::size_t>(test_coords.rows()));
  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(n_train));
  for (Index t = 0; t < test_coords.rows(); ++t) {
    order.clear();
    for (Index j = 0; j < n_train; ++j)
      order.emplace_back((test_coords.row(t) - train_coords.row(j)).norm(), j);
    std::nth_element(order.begin(), order.begin() + (kk - 1), order.end());
    std::sort(order.begin(), order.begin() + kk);
    std::map<int, int> votes;
    for (int s = 0; s < kk; ++s)
      ++votes[train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(s)].second)]];
    int best_label = votes.begin()->first;
    int best_count = votes.begin()->second;
    for (const auto& [label, count] : votes) {
      if (count > best_count) {
        best_label = label;
        best_count = count;
      }
    }
    predictions[static_cast<std::size_t>(t)] = best_label;
  }
  return predictions;
}

}  // namespace manrep
