#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsp/spectral.hpp"

namespace gsp {

struct ReconstructionResult {
  Eigen::VectorXd f_hat;
  std::string method;  // "consistent" or "variational"
  int power = 0;       // m for variational
  double residual = 0.0;
  double condition_hint = 0.0;  // sigma_min(U_SR) for consistent
  int iterations = 0;
};

// Least-squares fit of U_SR c = y_S by Householder QR, f_hat = U_VR c.
ReconstructionResult consistent_reconstruct(const GftBasis& basis, int r,
                                            const std::vector<int>& S,
                                            const Eigen::VectorXd& y_S);

// argmin |L^m y| subject to y_S = samples, by CGLS on the unknowns of S^c.
struct VariationalOptions {
  double tol = 1e-10;
  int max_iterations = 0;  // 0 means 20 |S^c|
};

ReconstructionResult variational_reconstruct(const VariationOperator& L, int m,
                                              const std::vector<int>& S,
                                              const Eigen::VectorXd& y_S,
                                              const VariationalOptions& opts = {});

struct ReconstructionMetrics {
  double mse = 0.0;
  std::optional<double> relative_error;  // absent for a zero true signal
};

ReconstructionMetrics reconstruction_metrics(const Eigen::VectorXd& f_true,
                                             const Eigen::VectorXd& f_hat);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double omega = 0.0;   // bandwidth of f
  double cutoff = 0.0;  // Omega_k(S)
};

// |f_hat_m - f| <= 2 (omega / Omega_k(S))^m |f|.
BoundCheck check_theorem2_bound(const VariationOperator& L, const GftBasis& basis,
                                const std::vector<int>& S, int k, int m,
                                const Eigen::VectorXd& f);

Eigen::VectorXd gather(const Eigen::VectorXd& f, const std::vector<int>& idx);

}  // namespace gsp
