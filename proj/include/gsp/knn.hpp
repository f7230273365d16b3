#pragma once

#include <optional>

#include "gsp/graph.hpp"

namespace gsp {

struct KnnOptions {
  bool symmetrize = true;
  // When set, weights are exp(-|x_i - x_j|^2 / (2 sigma^2)); otherwise 1.
  std::optional<double> kernel_sigma;
};

// Exact k nearest neighbours by Euclidean distance, ties to the lower index.
// With symmetrize the union of both directions is kept and the result is
// undirected.
Graph knn_graph(const FeatureMatrix& points, int k, const KnnOptions& opts = {});

}  // namespace gsp
