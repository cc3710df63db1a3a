// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "manrep/embedding.hpp"
#include "manrep/masked_metrics.hpp"
#include "manrep/metric_repair.hpp"
#include "manrep/types.hpp"

namespace manrep {

struct PipelineDiagnostics {
  Index zero_overlap_pairs = 0;
  int repair_iterations = 0;
  Index repair_l0 = 0;
  std::vector<Index> dropped_points;
};

/// Everything a repair-then-embed run produces: the estimated
/// dissimilarities D, the increase matrix P, and the embedding of
/// D + P.
struct PipelineResult {
  Embedding embedding;
  Dissimilarity dissimilarity;
  RepairDelta repair;
  PipelineDiagnostics diagnostics;
};

namespace detail {

inline PipelineResult repair_and_embed(Dissimilarity estimated,
                                       const Neighborhood& nb, int dim,
                                       const RepairConfig& repair_cfg,
                                       Index zero_overlap) {
  RepairResult repair = repair_to_fixpoint(estimated, repair_cfg);

  PipelineResult result;
  result.embedding = isomap(repair.repaired, nb, dim);
  result.dissimilarity = std::move(estimated);
  result.diagnostics.zero_overlap_pairs = zero_overlap;
  result.diagnostics.repair_iterations = repair.iterations;
  result.diagnostics.repair_l0 = repair.delta.l0();
  result.repair = std::move(repair.delta);

  const auto& kept = result.embedding.kept_indices;
  std::size_t cursor = 0;
  for (Index v = 0; v < result.dissimilarity.n(); ++v) {
    if (cursor < kept.size() && kept[cursor] == v)
      ++cursor;
    else
      result.diagnostics.dropped_points.push_back(v);
  }
  return result;
}

}  // namespace detail

/// Estimate distances over observed coordinates, repair them into a
/// metric, then embed the repaired matrix.
inline PipelineResult mr_missing(const MaskedDataset& data,
                                 const Neighborhood& nb, int dim,
                                 const RepairConfig& repair_cfg = {}) {
  Dissimilarity estimated = masked_euclidean(data);
  const Index zero_overlap = zero_overlap_pairs(data);
  return detail::repair_and_embed(std::move(estimated), nb, dim, repair_cfg,
                                  zero_overlap);
}

/// Repair an already-given (possibly corrupted) dissimilarity matrix
/// and embed it. No distance estimation stage.
inline PipelineResult repair_corrupted(const Dissimilarity& corrupted,
                                       const Neighborhood& nb, int dim,
                                       const RepairConfig& repair_cfg = {}) {
  return detail::repair_and_embed(corrupted, nb, dim, repair_cfg, 0);
}

}  // namespace manrep
