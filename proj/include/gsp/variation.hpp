#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "gsp/graph.hpp"

namespace gsp {

enum class OperatorKind {
  combinatorial,           // D - W
  sym_normalized,          // I - D^-1/2 W D^-1/2
  random_walk_undirected,  // I - D^-1 W
  adjacency_based,         // I - W / |mu_max|
  hub_authority,           // gamma (I - T'T) + (1 - gamma)(I - TT')
  random_walk_directed,    // I - (Pi^1/2 P Pi^-1/2 + Pi^-1/2 P' Pi^1/2) / 2
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

struct OperatorParams {
  double gamma = 0.5;  // hub_authority only
};

// L held in factored form: the graph plus per-node scaling vectors. All
// applies cost O(|E|) per column.
class VariationOperator {
 public:
  OperatorKind kind() const { return kind_; }
  bool symmetric() const { return symmetric_; }
  int size() const { return graph_->num_nodes(); }
  const Graph& graph() const { return *graph_; }
  double gamma() const { return gamma_; }

  // Cheap upper bound on the spectral norm |L|_2.
  double norm_bound() const { return norm_bound_; }
  double mu_max() const { return mu_max_; }
  // Stationary distribution; empty unless kind is random_walk_directed.
  const Eigen::VectorXd& stationary() const { return pi_; }

  // Column-wise L X and L' X.
  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

  // Explicit forms for oracles and debugging. Not used on the solver path.
  SpMat to_sparse() const;
  Eigen::MatrixXd to_dense() const;

 private:
  friend VariationOperator build_variation_operator(const Graph&, OperatorKind,
                                                    const OperatorParams&);

  OperatorKind kind_ = OperatorKind::combinatorial;
  bool symmetric_ = false;
  double gamma_ = 0.5;
  double norm_bound_ = 0.0;
  double mu_max_ = 0.0;
  std::shared_ptr<const Graph> graph_;
  // Per-node scalings, meaning depends on kind:
  //   combinatorial: a_ = out-degree
  //   sym_normalized: a_ = d^-1/2
  //   random_walk_undirected: a_ = d^-1
  //   hub_authority: a_ = q^-1/2, b_ = p^-1/2
  //   random_walk_directed: a_ = sqrt(pi), b_ = q^-1
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd pi_;

  Eigen::MatrixXd apply_t(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd apply_tt(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd apply_m(const Eigen::Ref<const Eigen::MatrixXd>& x, bool adjoint) const;
};

VariationOperator build_variation_operator(const Graph& g, OperatorKind kind,
                                           const OperatorParams& params = {});

// pi with pi P = pi for P = D_q^-1 W. Requires strong connectivity.
Eigen::VectorXd stationary_distribution(const Graph& g);

// |mu_max| of W.
double max_magnitude_eigenvalue(const Graph& g);

// Pseudo-inverse power of a degree vector: 0 where the degree is 0.
Eigen::VectorXd degree_power(const Eigen::VectorXd& d, double exponent);

}  // namespace gsp
