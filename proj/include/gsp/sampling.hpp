#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gsp/spectral.hpp"

namespace gsp {

struct SamplingSet {
  std::string method;
  int k = 0;  // 0 when the method has no order
  std::vector<int> nodes;  // selection order
  std::vector<double> per_step_cutoff;  // Omega_k after each addition

  // First m nodes, keeping cutoffs that apply.
  SamplingSet prefix(int m) const;
};

struct GreedyStats {
  long matvecs = 0;
  long iterations = 0;
};

SamplingSet select_greedy_proxy(const VariationOperator& L, int m, int k,
                                const SolverConfig& cfg = {},
                                GreedyStats* stats = nullptr);

enum class DesignCriterion { e_opt, a_opt };

SamplingSet select_optimal_design(const GftBasis& basis, int m, int r,
                                  DesignCriterion criterion);

SamplingSet select_m2(const GftBasis& basis, int m);

SamplingSet select_gauss_pivot(const GftBasis& basis, int m);

SamplingSet select_random(int n, int m, std::uint64_t seed);

// Exhaustive argmax of Omega_k(S) over |S| = m. Test oracle only.
std::pair<SamplingSet, double> brute_force_best_set(const VariationOperator& L, int m,
                                                    int k);

// Omega_k(S) from a dense SVD of L^k restricted to the columns S^c.
double dense_cutoff(const Eigen::MatrixXd& L, const std::vector<int>& S, int k);

std::vector<int> complement(int n, const std::vector<int>& S);

}  // namespace gsp
