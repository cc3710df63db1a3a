// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "manrep/rng.hpp"
#include "manrep/types.hpp"

namespace manrep {

enum class ManifoldKind { kM1, kM2, kM3, kM4, kM5, kM6, kSwissRoll };

inline const char* manifold_name(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::kM1: return "M1";
    case ManifoldKind::kM2: return "M2";
    case ManifoldKind::kM3: return "M3";
    case ManifoldKind::kM4: return "M4";
    case ManifoldKind::kM5: return "M5";
    case ManifoldKind::kM6: return "M6";
    case ManifoldKind::kSwissRoll: return "swissroll";
  }
  return "?";
}

inline ManifoldKind manifold_from_name(const std::string& name) {
  if (name == "M1" || name == "m1") return ManifoldKind::kM1;
  if (name == "M2" || name == "m2") return ManifoldKind::kM2;
  if (name == "M3" || name == "m3") return ManifoldKind::kM3;
  if (name == "M4" || name == "m4") return ManifoldKind::kM4;
  if (name == "M5" || name == "m5") return ManifoldKind::kM5;
  if (name == "M6" || name == "m6") return ManifoldKind::kM6;
  if (name == "swissroll" || name == "SwissRoll" || name == "swiss-roll")
    return ManifoldKind::kSwissRoll;
  throw std::invalid_argument("unknown manifold: " + name);
}

struct ManifoldSpec {
  ManifoldKind kind;
  Index n;
  std::uint64_t seed;
};

/// Generated points (full mask) plus the per-point generator
/// coordinates they were produced from.
struct SyntheticData {
  MaskedDataset data;
  Matrix intrinsic;
};

namespace detail {

// Row-major fills so the draw order is part of the contract.
inline Matrix uniform_matrix(Rng& rng, Index n, Index m) {
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = rng.uniform();
  return out;
}

inline Matrix normal_matrix(Rng& rng, Index n, Index m) {
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = rng.normal();
  return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

/// Swiss roll with the standard parameterization
///   t ~ U[1.5 pi, 4.5 pi], h ~ U[0, 21], point = (t cos t, h, t sin t).
inline SyntheticData swiss_roll(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("swiss_roll: n must be >= 1");
  Rng rng(seed);
  Matrix values(n, 3);
  Matrix intrinsic(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double t =
        rng.uniform(1.5 * std::numbers::pi, 4.5 * std::numbers::pi);
    const double h = rng.uniform(0.0, 21.0);
    intrinsic(i, 0) = t;
    intrinsic(i, 1) = h;
    values(i, 0) = t * std::cos(t);
    values(i, 1) = h;
    values(i, 2) = t * std::sin(t);
  }
  return {MaskedDataset::fully_observed(std::move(values)),
          std::move(intrinsic)};
}

inline SyntheticData generate(const ManifoldSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  const Index n = spec.n;
  Rng rng(spec.seed);
  switch (spec.kind) {
    case ManifoldKind::kM1: {
      const Matrix u = detail::uniform_matrix(rng, n, 2);
      const Matrix b = detail::normal_matrix(rng, 2, 30);
      Matrix values = (u * b).array().cos();
      return {MaskedDataset::fully_observed(std::move(values)), u};
    }
    case ManifoldKind::kM2: {
      const Matrix u = detail::uniform_matrix(rng, n, 2);
      const Matrix b1 = detail::normal_matrix(rng, 2, 30);
      const Matrix b2 = detail::normal_matrix(rng, 30, 300);
      const Matrix mid =
          (u * b1).unaryExpr([](double x) { return detail::sigmoid(x); });
      Matrix values = (mid * b2).array().cos();
      return {MaskedDataset::fully_observed(std::move(values)), u};
    }
    case ManifoldKind::kM3: {
      Matrix values(n, 3);
      Matrix intrinsic(n, 2);
      for (Index i = 0; i < n; ++i) {
        const double x = rng.normal();
        const double y = rng.normal();
        intrinsic(i, 0) = x;
        intrinsic(i, 1) = y;
        values(i, 0) = x;
        values(i, 1) = y;
        values(i, 2) = std::exp(-std::sqrt(x * x + y * y));
      }
      return {MaskedDataset::fully_observed(std::move(values)),
              std::move(intrinsic)};
    }
    case ManifoldKind::kM4: {
      Matrix values(n, 3);
      Matrix intrinsic(n, 2);
      for (Index i = 0; i < n; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        intrinsic(i, 0) = x;
        intrinsic(i, 1) = y;
        values(i, 0) = x;
        values(i, 1) = y;
        values(i, 2) = 20.0 * std::exp(-(x * x + y * y));
      }
      return {MaskedDataset::fully_observed(std::move(values)),
              std::move(intrinsic)};
    }
    case ManifoldKind::kM5: {
      SyntheticData roll = swiss_roll(n, spec.seed);
      Matrix values = roll.data.values().array().cos();
      return {MaskedDataset::fully_observed(std::move(values)),
              std::move(roll.intrinsic)};
    }
    case ManifoldKind::kM6: {
      Matrix values(n, 3);
      Matrix intrinsic(n, 1);
      for (Index i = 0; i < n; ++i) {
        const double u = rng.uniform(0.0, 4.0 * std::numbers::pi);
        const double v = 0.5 * u;
        intrinsic(i, 0) = u;
        values(i, 0) = (3.0 + std::cos(u)) * std::cos(v);
        values(i, 1) = (3.0 + std::cos(u)) * std::sin(v);
        values(i, 2) = std::sin(u);
      }
      return {MaskedDataset::fully_observed(std::move(values)),
              std::move(intrinsic)};
    }
    case ManifoldKind::kSwissRoll:
      return swiss_roll(n, spec.seed);
  }
  throw std::invalid_argument("generate: invalid manifold kind");
}

/// Masks exactly floor(fraction * n * m) positions, chosen uniformly
/// without replacement. Values are left untouched.
inline MaskedDataset mask_uniform_fraction(const MaskedDataset& data,
                                           double fraction,
                                           std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw std::invalid_argument(
        "mask_uniform_fraction: fraction must be in [0, 1)");
  const Index total = data.n() * data.m();
  const auto count = static_cast<Index>(
      std::floor(fraction * static_cast<double>(total)));
  std::vector<Index> positions(static_cast<std::size_t>(total));
  for (Index p = 0; p < total; ++p) positions[static_cast<std::size_t>(p)] = p;
  Rng rng(seed);
  BoolMatrix mask = data.mask();
  for (Index t = 0; t < count; ++t) {
    const Index pick =
        t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - t)));
    std::swap(positions[static_cast<std::size_t>(t)],
              positions[static_cast<std::size_t>(pick)]);
    const Index pos = positions[static_cast<std::size_t>(t)];
    mask(pos / data.m(), pos % data.m()) = false;
  }
  return MaskedDataset(data.values(), std::move(mask));
}

/// Each entry stays present independently with probability p_present.
inline MaskedDataset mask_bernoulli(const MaskedDataset& data,
                                    double p_present, std::uint64_t seed) {
  if (!(p_present > 0.0 && p_present <= 1.0))
    throw std::invalid_argument(
        "mask_bernoulli: p_present must be in (0, 1]");
  Rng rng(seed);
  BoolMatrix mask = data.mask();
  for (Index i = 0; i < data.n(); ++i)
    for (Index j = 0; j < data.m(); ++j)
      mask(i, j) = mask(i, j) && rng.bernoulli(p_present);
  return MaskedDataset(data.values(), std::move(mask));
}

/// Adds N(0, sigma^2) noise to every off-diagonal entry, clamps
/// negatives to zero, then symmetrizes by averaging with the
/// transpose. The diagonal stays zero.
inline Dissimilarity corrupt_distances_gaussian(const Dissimilarity& d,
                                                double sigma,
                                                std::uint64_t seed) {
  if (sigma < 0.0)
    throw std::invalid_argument("corrupt_distances_gaussian: sigma < 0");
  if (sigma == 0.0) return d;
  Rng rng(seed);
  const Index n = d.n();
  Matrix noisy = d.d;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) noisy(i, j) += sigma * rng.normal();
  noisy = noisy.cwiseMax(0.0);
  Matrix sym = 0.5 * (noisy + noisy.transpose());
  sym.diagonal().setZero();
  Dissimilarity out;
  out.d = std::move(sym);
  return out;
}

}  // namespace manrep
