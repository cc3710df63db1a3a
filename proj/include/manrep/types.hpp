// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace manrep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyComponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateReference : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A data matrix together with the presence mask of its entries.
/// Row = point, column = coordinate. Values at absent positions are
/// ignored and may hold any placeholder (including NaN).
class MaskedDataset {
 public:
  MaskedDataset(Matrix values, BoolMatrix mask)
      : values_(std::move(values)), mask_(std::move(mask)) {
    if (values_.rows() != mask_.rows() || values_.cols() != mask_.cols()) {
      throw ShapeError("MaskedDataset: values " +
                       std::to_string(values_.rows()) + "x" +
                       std::to_string(values_.cols()) + " vs mask " +
                       std::to_string(mask_.rows()) + "x" +
                       std::to_string(mask_.cols()));
    }
  }

  /// Dataset with every entry present.
  static MaskedDataset fully_observed(Matrix values) {
    BoolMatrix mask = BoolMatrix::Constant(values.rows(), values.cols(), true);
    return MaskedDataset(std::move(values), std::move(mask));
  }

  Index n() const { return values_.rows(); }
  Index m() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const BoolMatrix& mask() const { return mask_; }

  /// Rows with no observed coordinate at all.
  std::vector<Index> degenerate_rows() const {
    std::vector<Index> out;
    for (Index i = 0; i < mask_.rows(); ++i) {
      if (!mask_.row(i).any()) out.push_back(i);
    }
    return out;
  }

 private:
  Matrix values_;
  BoolMatrix mask_;
};

/// Symmetric nonnegative matrix with zero diagonal. Symmetry is exact:
/// every constructor mirrors the upper triangle into the lower one.
class Dissimilarity {
 public:
  Dissimilarity() = default;

  /// Validates and mirrors the strict upper triangle. Entries of the
  /// lower triangle in the argument are ignored.
  static Dissimilarity from_upper(Matrix m) {
    require_square(m);
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, i) != 0.0)
        throw std::invalid_argument("Dissimilarity: nonzero diagonal");
      for (Index j = i + 1; j < m.cols(); ++j) {
        if (!(m(i, j) >= 0.0))
          throw std::invalid_argument("Dissimilarity: negative or NaN entry");
        m(j, i) = m(i, j);
      }
    }
    Dissimilarity d;
    d.d = std::move(m);
    return d;
  }

  /// Accepts a matrix that is symmetric up to `sym_tol` (absolute) and
  /// re-mirrors it so the stored matrix is exactly symmetric.
  static Dissimilarity from_symmetric(Matrix m, double sym_tol = 0.0) {
    require_square(m);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = i + 1; j < m.cols(); ++j) {
        if (!(std::abs(m(i, j) - m(j, i)) <= sym_tol))
          throw std::invalid_argument("Dissimilarity: asymmetric input");
      }
    }
    return from_upper(std::move(m));
  }

  Index n() const { return d.rows(); }

  double max_entry() const { return d.size() == 0 ? 0.0 : d.maxCoeff(); }

  Matrix d;

 private:
  static void require_square(const Matrix& m) {
    if (m.rows() != m.cols())
      throw ShapeError("Dissimilarity: matrix must be square");
  }
};

}  // namespace manrep
