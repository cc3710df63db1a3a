// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <barrier>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "manrep/parallel.hpp"
#include "manrep/types.hpp"

namespace manrep {

/// Undirected weighted graph over n vertices. Edges are stored once
/// with i < j; weights may be zero (duplicate points) but never
/// negative.
struct NeighborGraph {
  struct Edge {
    Index i, j;
    double weight;
  };
  Index n = 0;
  std::vector<Edge> edges;
};

/// Edge (i, j) present iff j is among i's k nearest or i among j's k
/// nearest. Ties at the k-th distance break toward the lower index.
inline NeighborGraph knn_graph(const Dissimilarity& d, int k) {
  const Index n = d.n();
  if (k < 1 || k >= n)
    throw std::invalid_argument("knn_graph: k must satisfy 1 <= k < n");
  BoolMatrix adj = BoolMatrix::Constant(n, n, false);
  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(n) - 1);
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.emplace_back(d.d(i, j), j);
    std::sort(order.begin(), order.end());
    for (int t = 0; t < k; ++t) {
      const Index j = order[static_cast<std::size_t>(t)].second;
      adj(i, j) = adj(j, i) = true;
    }
  }
  NeighborGraph g;
  g.n = n;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (adj(i, j)) g.edges.push_back({i, j, d.d(i, j)});
  return g;
}

/// Edge for every pair with d <= eps; zero-distance pairs always get a
/// weight-0 edge.
inline NeighborGraph epsilon_graph(const Dissimilarity& d, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("epsilon_graph: eps must be > 0");
  NeighborGraph g;
  g.n = d.n();
  for (Index i = 0; i < g.n; ++i)
    for (Index j = i + 1; j < g.n; ++j)
      if (d.d(i, j) <= eps) g.edges.push_back({i, j, d.d(i, j)});
  return g;
}

/// All-pairs shortest-path distances. Entries across different
/// components are +infinity; component_ids label vertices in order of
/// first appearance.
struct GeodesicMatrix {
  Matrix g;
  std::vector<int> component_ids;
  Index n() const { return g.rows(); }
};

namespace detail {

inline std::vector<int> label_components(const NeighborGraph& graph) {
  std::vector<Index> parent(static_cast<std::size_t>(graph.n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : graph.edges) {
    const Index a = find(e.i), b = find(e.j);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> label(static_cast<std::size_t>(graph.n), -1);
  int next = 0;
  for (Index v = 0; v < graph.n; ++v) {
    const Index root = find(v);
    if (label[static_cast<std::size_t>(root)] < 0)
      label[static_cast<std::size_t>(root)] = next++;
    label[static_cast<std::size_t>(v)] = label[static_cast<std::size_t>(root)];
  }
  return label;
}

// Floyd-Warshall, parallel over columns. Column k is invariant during
// iteration k, so the only synchronization needed is a barrier between
// successive k. The update set of each worker is fixed by the column
// partition, which keeps results identical for any worker count.
inline void floyd_warshall(Matrix& dist) {
  const Index n = dist.rows();
  const int threads =
      static_cast<int>(std::min<Index>(parallel::resolve_threads(), n));
  if (threads <= 1) {
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j) {
        const double dkj = dist(k, j);
        if (!std::isfinite(dkj)) continue;
        dist.col(j) = dist.col(j).cwiseMin((dist.col(k).array() + dkj).matrix());
      }
    return;
  }
  std::barrier sync(threads);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const Index chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const Index lo = w * chunk;
    const Index hi = std::min(n, lo + chunk);
    pool.emplace_back([&dist, &sync, lo, hi, n] {
      for (Index k = 0; k < n; ++k) {
        for (Index j = lo; j < hi; ++j) {
          const double dkj = dist(k, j);
          if (!std::isfinite(dkj)) continue;
          dist.col(j) = dist.col(j).cwiseMin((dist.col(k).array() + dkj).matrix());
        }
        sync.arrive_and_wait();
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline GeodesicMatrix geodesic_distances(const NeighborGraph& graph) {
  const Index n = graph.n;
  constexpr double inf = std::numeric_limits<double>::infinity();
  GeodesicMatrix out;
  out.g = Matrix::Constant(n, n, inf);
  out.g.diagonal().setZero();
  for (const auto& e : graph.edges) {
    out.g(e.i, e.j) = std::min(out.g(e.i, e.j), e.weight);
    out.g(e.j, e.i) = out.g(e.i, e.j);
  }
  detail::floyd_warshall(out.g);
  out.component_ids = detail::label_components(graph);
  return out;
}

/// Restriction of a geodesic matrix to its largest component (ties go
/// to the component containing the lowest vertex index). The second
/// element maps restricted rows back to original indices.
inline std::pair<GeodesicMatrix, std::vector<Index>> largest_component(
    const GeodesicMatrix& geo) {
  const Index n = geo.n();
  std::vector<Index> size;
  for (int id : geo.component_ids) {
    if (static_cast<std::size_t>(id) >= size.size())
      size.resize(static_cast<std::size_t>(id) + 1, 0);
    ++size[static_cast<std::size_t>(id)];
  }
  // Labels are assigned in first-appearance order, so the first
  // maximal label is the component containing the lowest index.
  int best = 0;
  for (std::size_t c = 1; c < size.size(); ++c)
    if (size[c] > size[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  std::vector<Index> kept;
  for (Index v = 0; v < n; ++v)
    if (geo.component_ids[static_cast<std::size_t>(v)] == best) kept.push_back(v);

  GeodesicMatrix out;
  const Index m = static_cast<Index>(kept.size());
  out.g.resize(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      out.g(a, b) = geo.g(kept[static_cast<std::size_t>(a)],
                          kept[static_cast<std::size_t>(b)]);
  out.component_ids.assign(static_cast<std::size_t>(m), 0);
  return {std::move(out), std::move(kept)};
}

/// Low-dimensional coordinates from classical multidimensional
/// scaling, plus the pre-clamp spectrum used to produce them.
struct Embedding {
  Matrix coords;              // n x d
  Vector eigenvalues;         // length d, nonincreasing, pre-clamp
  std::vector<Index> kept_indices;  // original row of each coords row
};

/// Classical MDS: double-center the squared distances, take the top
/// `dim` eigenpairs, scale eigenvectors by sqrt of their eigenvalues.
/// Negative eigenvalues are clamped to zero (their columns vanish) but
/// reported unclamped. Columns are centered exactly and sign-fixed so
/// the largest-magnitude entry of each is positive.
inline Embedding classical_mds(const GeodesicMatrix& dt, int dim) {
  const Index n = dt.n();
  if (dim < 1 || dim > n)
    throw std::invalid_argument("classical_mds: dim out of range");
  if (!dt.g.allFinite())
    throw std::invalid_argument("classical_mds: distances must be finite");

  const Matrix sq = dt.g.array().square();
  const Vector row_mean = sq.rowwise().mean();
  const double grand_mean = sq.mean();
  Matrix s(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      s(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand_mean);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("classical_mds: eigendecomposition failed");

  Embedding emb;
  emb.coords.resize(n, dim);
  emb.eigenvalues.resize(dim);
  for (int c = 0; c < dim; ++c) {
    const Index src = n - 1 - c;  // solver sorts ascending
    const double lambda = solver.eigenvalues()(src);
    emb.eigenvalues(c) = lambda;
    if (lambda > 0.0)
      emb.coords.col(c) = solver.eigenvectors().col(src) * std::sqrt(lambda);
    else
      emb.coords.col(c).setZero();
  }
  emb.coords.rowwise() -= emb.coords.colwise().mean();
  for (int c = 0; c < dim; ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double mag = std::abs(emb.coords(i, c));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (emb.coords(arg, c) < 0.0) emb.coords.col(c) = -emb.coords.col(c);
  }
  emb.kept_indices.resize(static_cast<std::size_t>(n));
  std::iota(emb.kept_indices.begin(), emb.kept_indices.end(), Index{0});
  return emb;
}

/// Neighborhood rule for graph construction.
struct Neighborhood {
  enum class Kind { kKnn, kEpsilon };
  Kind kind = Kind::kKnn;
  int k = 10;
  double eps = 0.0;

  static Neighborhood knn(int k) {
    Neighborhood nb;
    nb.kind = Kind::kKnn;
    nb.k = k;
    return nb;
  }
  static Neighborhood epsilon(double eps) {
    Neighborhood nb;
    nb.kind = Kind::kEpsilon;
    nb.eps = eps;
    return nb;
  }
};

inline NeighborGraph build_graph(const Dissimilarity& d,
                                 const Neighborhood& nb) {
  return nb.kind == Neighborhood::Kind::kKnn ? knn_graph(d, nb.k)
                                             : epsilon_graph(d, nb.eps);
}

/// Isomap stages kept together for callers that need the geodesics of
/// the embedded component (diagnostics, out-of-sample projection).
struct IsomapResult {
  Embedding embedding;
  GeodesicMatrix geodesics;  // restricted to the embedded component
};

inline IsomapResult isomap_stages(const Dissimilarity& d,
                                  const Neighborhood& nb, int dim) {
  const Index n = d.n();
  if (dim < 1 || dim > n)
    throw std::invalid_argument("isomap: dim out of range");
  if (n == 1) {
    // No pairs to build a graph from; a single point embeds at the
    // origin.
    IsomapResult r;
    r.embedding.coords = Matrix::Zero(1, 1);
    r.embedding.eigenvalues = Vector::Zero(1);
    r.embedding.kept_indices = {0};
    r.geodesics.g = Matrix::Zero(1, 1);
    r.geodesics.component_ids = {0};
    return r;
  }
  const NeighborGraph graph = build_graph(d, nb);
  const GeodesicMatrix geo = geodesic_distances(graph);
  auto [restricted, kept] = largest_component(geo);
  if (restricted.n() < dim + 1)
    throw EmptyComponent("isomap: largest component has " +
                         std::to_string(restricted.n()) +
                         " points, need at least " + std::to_string(dim + 1));
  IsomapResult r;
  r.embedding = classical_mds(restricted, dim);
  r.embedding.kept_indices = kept;
  r.geodesics = std::move(restricted);
  return r;
}

inline Embedding isomap(const Dissimilarity& d, const Neighborhood& nb,
                        int dim) {
  return isomap_stages(d, nb, dim).embedding;
}

/// Shortest-path extension of new-point distances through the training
/// set: out(t, i) = min_j (direct(t, j) + geodesic(j, i)).
inline Matrix geodesic_extension(const GeodesicMatrix& train,
                                 const Matrix& direct) {
  const Index n = train.n();
  if (direct.cols() != n)
    throw ShapeError("geodesic_extension: column count != training size");
  Matrix out(direct.rows(), n);
  parallel::for_each_index(0, direct.rows(), [&](std::int64_t t) {
    const Vector row = direct.row(t).transpose();
    for (Index i = 0; i < n; ++i)
      out(t, i) = (row + train.g.col(i)).minCoeff();
  });
  return out;
}

/// Nystrom-style projection of new points into an existing embedding
/// from their distances to the training points. Coordinates whose
/// eigenvalue vanished in training are zero.
inline Matrix out_of_sample(const GeodesicMatrix& train,
                            const Embedding& emb,
                            const Matrix& new_to_train) {
  const Index n = train.n();
  const Index dim = emb.coords.cols();
  if (new_to_train.cols() != n)
    throw ShapeError("out_of_sample: distance vector length != training size");
  if (emb.coords.rows() != n)
    throw ShapeError("out_of_sample: embedding does not match geodesics");

  const Vector row_mean = train.g.array().square().rowwise().mean();
  const double lambda_max = emb.eigenvalues.size() > 0
                                ? std::max(emb.eigenvalues(0), 0.0)
                                : 0.0;
  Matrix out = Matrix::Zero(new_to_train.rows(), dim);
  for (Index t = 0; t < new_to_train.rows(); ++t) {
    const Vector stat =
        row_mean - new_to_train.row(t).transpose().array().square().matrix();
    for (Index c = 0; c < dim; ++c) {
      const double lambda = emb.eigenvalues(c);
      if (lambda <= 0.0 || lambda <= 1e-12 * lambda_max) continue;
      // coords column = sqrt(lambda) * eigenvector, so dividing by
      // 2*lambda gives the (1 / (2 sqrt(lambda))) * eigenvector form.
      out(t, c) = emb.coords.col(c).dot(stat) / (2.0 * lambda);
    }
  }
  return out;
}

}  // namespace manrep
