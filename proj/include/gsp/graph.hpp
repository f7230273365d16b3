#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace gsp {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// One point per row.
using FeatureMatrix = Eigen::MatrixXd;

struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 1.0;
};

// Weighted graph held as a row-compressed adjacency W with W(i, j) = w_ij for
// the edge i -> j. Undirected graphs store both orientations. Immutable.
class Graph {
 public:
  Graph() = default;

  // Undirected input lists every pair once, in either orientation.
  static Graph from_edges(int n, const std::vector<Edge>& edges, bool directed);
  // W must be square with positive off-diagonal entries only; symmetric if
  // !directed.
  static Graph from_adjacency(SpMat w, bool directed);

  int num_nodes() const { return n_; }
  bool directed() const { return directed_; }
  // Undirected edges count once.
  Eigen::Index num_edges() const;

  const SpMat& weights() const { return w_; }
  const SpMat& weights_transposed() const { return wt_; }

  // Undirected graphs report src < dst only. Sorted by (src, dst).
  std::vector<Edge> edges() const;

  // Out-degree q_i = sum_j w_ij. Equals d_i when undirected.
  Eigen::VectorXd out_degrees() const;
  // In-degree p_i = sum_j w_ji.
  Eigen::VectorXd in_degrees() const;

  bool operator==(const Graph& other) const;

 private:
  int n_ = 0;
  bool directed_ = false;
  SpMat w_;
  SpMat wt_;
};

Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes);

}  // namespace gsp
