#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gsp/graph.hpp"
#include "gsp/random.hpp"
#include "gsp/variation.hpp"

namespace testing {

inline gsp::Graph two_node() { return gsp::Graph::from_edges(2, {{0, 1, 1.0}}, false); }

inline gsp::Graph path(int n) {
  std::vector<gsp::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return gsp::Graph::from_edges(n, e, false);
}

// Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with unit weights.
inline gsp::Graph cycle(int n, bool directed) {
  std::vector<gsp::Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return gsp::Graph::from_edges(n, e, directed);
}

// Random weighted graph built edge by edge, weights in [0.5, 2).
inline gsp::Graph random_weighted(int n, double p, std::uint64_t seed, bool directed) {
  gsp::Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<gsp::Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (u(rng) < p) e.push_back({i, j, 0.5 + 1.5 * u(rng)});
    }
  }
  return gsp::Graph::from_edges(n, e, directed);
}

// Random strongly connected digraph: a directed Hamiltonian cycle plus extras.
inline gsp::Graph random_strong_digraph(int n, double p, std::uint64_t seed) {
  gsp::Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<gsp::Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (j == (i + 1) % n) {
        e.push_back({i, j, 0.5 + 1.5 * u(rng)});
      } else if (u(rng) < p) {
        e.push_back({i, j, 0.5 + 1.5 * u(rng)});
      }
    }
  }
  return gsp::Graph::from_edges(n, e, true);
}

// Dense W from the edge list, W(i, j) = weight of i -> j.
inline Eigen::MatrixXd dense_w(const gsp::Graph& g) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& e : g.edges()) {
    w(e.src, e.dst) = e.weight;
    if (!g.directed()) w(e.dst, e.src) = e.weight;
  }
  return w;
}

// Smallest eigenvalue of ((L')^k L^k) restricted to the complement of S.
inline double reduced_sigma(const Eigen::MatrixXd& l, const std::vector<int>& S, int k) {
  const int n = static_cast<int>(l.rows());
  Eigen::MatrixXd lk = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < k; ++i) lk = l * lk;
  const Eigen::MatrixXd m = lk.transpose() * lk;
  std::vector<char> in(n, 0);
  for (int v : S) in[v] = 1;
  std::vector<int> sc;
  for (int v = 0; v < n; ++v) {
    if (!in[v]) sc.push_back(v);
  }
  Eigen::MatrixXd r(sc.size(), sc.size());
  for (size_t i = 0; i < sc.size(); ++i) {
    for (size_t j = 0; j < sc.size(); ++j) r(i, j) = m(sc[i], sc[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()[0]);
}

// Same quantity as sigma_min(L^k E)^2, which keeps more digits for larger k.
inline double reduced_sigma_svd(const Eigen::MatrixXd& l, const std::vector<int>& S, int k) {
  const int n = static_cast<int>(l.rows());
  Eigen::MatrixXd lk = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < k; ++i) lk = l * lk;
  std::vector<char> in(n, 0);
  for (int v : S) in[v] = 1;
  std::vector<int> sc;
  for (int v = 0; v < n; ++v) {
    if (!in[v]) sc.push_back(v);
  }
  Eigen::MatrixXd cols(n, sc.size());
  for (size_t j = 0; j < sc.size(); ++j) cols.col(j) = lk.col(sc[j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols);
  const double s = svd.singularValues()[sc.size() - 1];
  return s * s;
}

inline Eigen::VectorXd pinv_pow(const Eigen::VectorXd& d, double e) {
  Eigen::VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) out[i] = d[i] > 0 ? std::pow(d[i], e) : 0.0;
  return out;
}

// Stationary distribution from a dense eigensolve of P'.
inline Eigen::VectorXd dense_stationary(const Eigen::MatrixXd& w) {
  const Eigen::VectorXd q = w.rowwise().sum();
  const Eigen::MatrixXd p = pinv_pow(q, -1.0).asDiagonal() * w;
  Eigen::EigenSolver<Eigen::MatrixXd> es(p.transpose());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = i;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

// Dense L written straight from the operator definitions.
inline Eigen::MatrixXd dense_operator(const gsp::Graph& g, gsp::OperatorKind kind,
                                      double gamma = 0.5) {
  using gsp::OperatorKind;
  const Eigen::MatrixXd w = dense_w(g);
  const int n = g.num_nodes();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd q = w.rowwise().sum();
  const Eigen::VectorXd p = w.colwise().sum().transpose();
  switch (kind) {
    case OperatorKind::combinatorial:
      return Eigen::MatrixXd(q.asDiagonal()) - w;
    case OperatorKind::sym_normalized: {
      const Eigen::VectorXd s = pinv_pow(q, -0.5);
      return id - s.asDiagonal() * w * s.asDiagonal();
    }
    case OperatorKind::random_walk_undirected:
      return id - pinv_pow(q, -1.0).asDiagonal() * w;
    case OperatorKind::adjacency_based: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(w, false);
      const double mu = es.eigenvalues().cwiseAbs().maxCoeff();
      return id - w / mu;
    }
    case OperatorKind::hub_authority: {
      const Eigen::MatrixXd t = pinv_pow(q, -0.5).asDiagonal() * w * pinv_pow(p, -0.5).asDiagonal();
      return gamma * (id - t.transpose() * t) + (1.0 - gamma) * (id - t * t.transpose());
    }
    case OperatorKind::random_walk_directed: {
      const Eigen::VectorXd pi = dense_stationary(w);
      const Eigen::MatrixXd pm = pinv_pow(q, -1.0).asDiagonal() * w;
      const Eigen::MatrixXd m =
          pinv_pow(pi, 0.5).asDiagonal() * pm * pinv_pow(pi, -0.5).asDiagonal();
      return id - 0.5 * (m + m.transpose());
    }
  }
  return id;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testing
