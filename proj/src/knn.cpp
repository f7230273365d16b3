#include "gsp/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gsp/errors.hpp"

namespace gsp {

Graph knn_graph(const FeatureMatrix& points, int k, const KnnOptions& opts) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw InvalidArgument("knn_graph: no points");
  if (k < 1 || k >= n) throw InvalidArgument("knn_graph: need 1 <= k < n_points");
  if (!points.allFinite()) throw InvalidArgument("knn_graph: non-finite feature");
  if (opts.kernel_sigma && !(*opts.kernel_sigma > 0.0)) {
    throw InvalidArgument("knn_graph: kernel sigma must be positive");
  }

  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(static_cast<size_t>(n) * k * (opts.symmetrize ? 2 : 1));
  std::vector<double> dist(static_cast<size_t>(n));
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist[j] = (points.row(i) - points.row(j)).squaredNorm();
    order.resize(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    for (int t = 0; t < k; ++t) {
      const int j = order[t];
      double w = 1.0;
      if (opts.kernel_sigma) {
        const double s = *opts.kernel_sigma;
        // Zero distance (duplicate point) gives exp(0) = 1, the largest
        // weight any row can hold.
        w = std::exp(-dist[j] / (2.0 * s * s));
        if (w <= 0.0) w = std::numeric_limits<double>::min();
      }
      trips.emplace_back(i, j, w);
    }
  }

  SpMat w(n, n);
  if (!opts.symmetrize) {
    w.setFromTriplets(trips.begin(), trips.end());
    return Graph::from_adjacency(std::move(w), true);
  }
  // Union: keep (i, j) if either end lists the other. Weights are symmetric
  // functions of the pair, so max() only deduplicates.
  const size_t one_way = trips.size();
  for (size_t t = 0; t < one_way; ++t) {
    trips.emplace_back(trips[t].col(), trips[t].row(), trips[t].value());
  }
  w.setFromTriplets(trips.begin(), trips.end(),
                    [](double a, double b) { return std::max(a, b); });
  return Graph::from_adjacency(std::move(w), false);
}

}  // namespace gsp
