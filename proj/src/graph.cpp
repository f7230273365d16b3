#include "gsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsp/errors.hpp"

namespace gsp {

namespace {

void check_structure(const SpMat& w) {
  if (w.rows() != w.cols()) throw InvalidArgument("adjacency must be square");
  for (int i = 0; i < w.outerSize(); ++i) {
    for (SpMat::InnerIterator it(w, i); it; ++it) {
      if (it.col() == i) {
        throw InvalidArgument("self-loop at node " + std::to_string(i));
      }
      if (!(it.value() > 0.0) || !std::isfinite(it.value())) {
        throw InvalidArgument("non-positive weight on edge " + std::to_string(i) + "->" +
                              std::to_string(it.col()));
      }
    }
  }
}

}  // namespace

Graph Graph::from_edges(int n, const std::vector<Edge>& edges, bool directed) {
  if (n < 0) throw InvalidArgument("negative node count");
  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(edges.size() * (directed ? 1 : 2));
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw InvalidArgument("edge endpoint out of range");
    }
    if (e.src == e.dst) throw InvalidArgument("self-loop at node " + std::to_string(e.src));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("non-positive edge weight");
    }
    trips.emplace_back(e.src, e.dst, e.weight);
    if (!directed) trips.emplace_back(e.dst, e.src, e.weight);
  }
  SpMat w(n, n);
  // Count duplicates by summing ones over the same pattern.
  SpMat count(n, n);
  {
    auto ones = trips;
    for (auto& t : ones) t = Eigen::Triplet<double, int>(t.row(), t.col(), 1.0);
    count.setFromTriplets(ones.begin(), ones.end());
    for (int i = 0; i < n; ++i) {
      for (SpMat::InnerIterator it(count, i); it; ++it) {
        if (it.value() > 1.0) {
          throw InvalidArgument("duplicate edge " + std::to_string(i) + "->" +
                                std::to_string(it.col()));
        }
      }
    }
  }
  w.setFromTriplets(trips.begin(), trips.end());
  w.makeCompressed();
  return from_adjacency(std::move(w), directed);
}

Graph Graph::from_adjacency(SpMat w, bool directed) {
  w.prune(0.0, 0.0);
  w.makeCompressed();
  check_structure(w);
  Graph g;
  g.n_ = static_cast<int>(w.rows());
  g.directed_ = directed;
  g.wt_ = w.transpose();
  g.wt_.makeCompressed();
  if (!directed) {
    // Exact symmetry: same pattern and bitwise equal values.
    if (w.nonZeros() != g.wt_.nonZeros()) throw InvalidArgument("undirected W not symmetric");
    for (int i = 0; i < g.n_; ++i) {
      SpMat::InnerIterator a(w, i), b(g.wt_, i);
      for (; a && b; ++a, ++b) {
        if (a.col() != b.col() || a.value() != b.value()) {
          throw InvalidArgument("undirected W not symmetric");
        }
      }
    }
  }
  g.w_ = std::move(w);
  return g;
}

Eigen::Index Graph::num_edges() const {
  return directed_ ? w_.nonZeros() : w_.nonZeros() / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<size_t>(num_edges()));
  for (int i = 0; i < n_; ++i) {
    for (SpMat::InnerIterator it(w_, i); it; ++it) {
      if (!directed_ && it.col() < i) continue;
      out.push_back({i, static_cast<int>(it.col()), it.value()});
    }
  }
  return out;
}

Eigen::VectorXd Graph::out_degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    for (SpMat::InnerIterator it(w_, i); it; ++it) d[i] += it.value();
  }
  return d;
}

Eigen::VectorXd Graph::in_degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    for (SpMat::InnerIterator it(wt_, i); it; ++it) d[i] += it.value();
  }
  return d;
}

bool Graph::operator==(const Graph& other) const {
  if (n_ != other.n_ || directed_ != other.directed_) return false;
  if (w_.nonZeros() != other.w_.nonZeros()) return false;
  for (int i = 0; i < n_; ++i) {
    SpMat::InnerIterator a(w_, i), b(other.w_, i);
    for (; a && b; ++a, ++b) {
      if (a.col() != b.col() || a.value() != b.value()) return false;
    }
    if (a || b) return false;
  }
  return true;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes) {
  std::vector<int> pos(static_cast<size_t>(g.num_nodes()), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || nodes[i] >= g.num_nodes()) throw InvalidArgument("node out of range");
    if (pos[nodes[i]] != -1) throw InvalidArgument("repeated node in subgraph list");
    pos[nodes[i]] = static_cast<int>(i);
  }
  const int m = static_cast<int>(nodes.size());
  std::vector<Eigen::Triplet<double, int>> trips;
  for (int i = 0; i < m; ++i) {
    for (SpMat::InnerIterator it(g.weights(), nodes[i]); it; ++it) {
      const int j = pos[it.col()];
      if (j >= 0) trips.emplace_back(i, j, it.value());
    }
  }
  SpMat w(m, m);
  w.setFromTriplets(trips.begin(), trips.end());
  return Graph::from_adjacency(std::move(w), g.directed());
}

}  // namespace gsp
