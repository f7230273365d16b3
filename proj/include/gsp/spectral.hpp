#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gsp/variation.hpp"

namespace gsp {

// Eigenpairs of L sorted ascending by |lambda|. For real spectra `eigenvalues`
// holds the signed values and `eigenvectors` the (unit norm) columns. When the
// spectrum is complex, `is_complex` is set, `eigenvalues` holds |lambda| and
// the complex pair lives in the complex_* members.
struct GftBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  bool orthonormal = false;
  bool is_complex = false;
  Eigen::VectorXcd complex_eigenvalues;
  Eigen::MatrixXcd complex_eigenvectors;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  // GFT coefficients U^-1 f, magnitudes only.
  Eigen::VectorXd coefficient_magnitudes(const Eigen::VectorXd& f) const;
};

inline constexpr int kDefaultDenseCap = 3000;

GftBasis dense_gft(const VariationOperator& L, int dense_cap = kDefaultDenseCap);

// Largest |lambda_i| whose coefficient exceeds tol * |coefficients|. A lone
// first coefficient gives 0 when lambda_1 is zero up to rounding.
double bandwidth(const Eigen::VectorXd& f, const GftBasis& basis, double tol = 1e-12);

// omega_k(f) = (|L^k f| / |f|)^(1/k).
double spectral_proxy(const VariationOperator& L, const Eigen::VectorXd& f, int k);

// sigma_min(U_SR).
double cos_theta_max(const GftBasis& basis, const std::vector<int>& S, int r);

enum class Preconditioner {
  automatic,
  none,
  // Schur-corrected inverse of G = (L + a)^2k (symmetric PSD L) or
  // (L'L + a^2)^k restricted to S^c, with G^-1 applied by Chebyshev
  // semi-iteration. At high k the low modes of L are split off first.
  chebyshev_schur,
};

struct SolverConfig {
  double tol = 1e-8;
  int max_iterations = 0;  // 0 means 50 |S^c|
  std::uint64_t seed = 0;
  double perturbation = 1e-3;
  Preconditioner preconditioner = Preconditioner::automatic;
  // Problems with estimated condition (|L| / a)^2k below this run
  // unpreconditioned under `automatic`.
  double plain_condition_limit = 3e3;
  // Preconditioner shift as a fraction of the running Omega_k estimate.
  double shift_factor = 0.5;
  // Chebyshev target reduction per inner solve.
  double chebyshev_reduction = 1e-2;
};

struct CutoffEstimate {
  double omega = 0.0;
  double sigma = 0.0;
  Eigen::VectorXd phi_star;  // unit norm, exactly zero on S
  int k = 1;
  int iterations = 0;
  double residual = 0.0;  // |M x - sigma x| for the returned pair
  long matvecs = 0;
};

// Smallest eigenpair of ((L')^k L^k) restricted to S^c using applies of L and
// L' only. Holds state that is reused across calls on growing sets: the
// operator scaling, the preconditioner shift and its cached columns.
class CutoffSolver {
 public:
  CutoffSolver(const VariationOperator& L, int k, SolverConfig cfg = {});
  ~CutoffSolver();
  CutoffSolver(CutoffSolver&&) noexcept;
  CutoffSolver& operator=(CutoffSolver&&) noexcept;

  // `start`, if given, is a length-N vector whose S^c part seeds the iteration.
  CutoffEstimate solve(const std::vector<int>& S,
                       const Eigen::VectorXd* start = nullptr);

  // Lower estimate of Omega_k for the next solve (e.g. the previous value on a
  // subset). Skips the k = 1 bootstrap.
  void set_omega_hint(double omega);

  long matvecs() const;
  int k() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CutoffEstimate cutoff_estimate(const VariationOperator& L, const std::vector<int>& S,
                               int k, const SolverConfig& cfg = {});

}  // namespace gsp
